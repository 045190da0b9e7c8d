//! TPM interchange: headerless CSV (canonical) and a small JSON form.

use std::fs;
use std::path::Path;

use emergence_core::{Error, Tpm64};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum TpmFormat {
    Csv,
    Json,
}

impl TpmFormat {
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(e) if e.eq_ignore_ascii_case("json") => TpmFormat::Json,
            _ => TpmFormat::Csv,
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct TpmJson {
    n: usize,
    rows: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    labels: Option<Vec<String>>,
}

fn parse_error(source: &str, message: impl Into<String>) -> CliError {
    CliError::Parse {
        path: source.to_string(),
        message: message.into(),
    }
}

// core errors count rows from zero; files count lines from one
fn locate(source: &str, e: Error) -> CliError {
    let msg = match e {
        Error::NonSquare { rows, row, cols } => {
            format!("line {}: {cols} entries in a {rows}-row matrix", row + 1)
        }
        Error::NegativeEntry { row, col, value } => {
            format!("line {}, column {}: entry {value} is negative or not finite", row + 1, col + 1)
        }
        Error::RowSumViolation { row, deviation } => {
            format!("line {}: row sums to 1 {deviation:+e}", row + 1)
        }
        Error::Empty => "no rows".into(),
        other => return CliError::Core(other),
    };
    parse_error(source, msg)
}

/// Parses a headerless CSV matrix. Blank lines and lines starting with `#` are skipped.
pub fn parse_tpm_csv(text: &str, source: &str) -> CliResult<Tpm64> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| parse_error(source, e.to_string()))?;
        let line = record.position().map_or(rows.len() + 1, |p| p.line() as usize);
        if record.iter().all(str::is_empty) {
            continue;
        }
        let row = record
            .iter()
            .enumerate()
            .map(|(c, cell)| {
                cell.parse::<f64>()
                    .map_err(|_| parse_error(source, format!("line {line}, column {}: {cell:?} is not a number", c + 1)))
            })
            .collect::<CliResult<Vec<f64>>>()?;
        rows.push((line, row));
    }
    let n = rows.len();
    if let Some((line, row)) = rows.iter().find(|(_, r)| r.len() != n) {
        return Err(parse_error(
            source,
            format!("line {line}: {} entries in a {n}-row matrix", row.len()),
        ));
    }
    let rows: Vec<Vec<f64>> = rows.into_iter().map(|(_, r)| r).collect();
    Tpm64::from_rows(&rows).map_err(|e| locate(source, e))
}

/// Shortest decimal form of each entry that parses back to the same `f64`.
pub fn tpm_to_csv(t: &Tpm64) -> String {
    let mut out = String::new();
    for row in t.rows() {
        let cells: Vec<String> = row.iter().map(|x| x.to_string()).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

pub fn parse_tpm_json(text: &str, source: &str) -> CliResult<Tpm64> {
    let doc: TpmJson = serde_json::from_str(text).map_err(|e| parse_error(source, e.to_string()))?;
    if doc.rows.len() != doc.n {
        return Err(parse_error(source, format!("n is {} but {} rows are given", doc.n, doc.rows.len())));
    }
    let t = Tpm64::from_rows(&doc.rows).map_err(|e| locate(source, e))?;
    match doc.labels {
        Some(labels) => Ok(t.with_labels(labels)?),
        None => Ok(t),
    }
}

pub fn tpm_to_json(t: &Tpm64) -> String {
    let doc = TpmJson {
        n: t.n(),
        rows: t.to_rows(),
        labels: t.labels().map(<[String]>::to_vec),
    };
    let mut s = serde_json::to_string_pretty(&doc).expect("plain data serializes");
    s.push('\n');
    s
}

pub fn format_tpm(t: &Tpm64, format: TpmFormat) -> String {
    match format {
        TpmFormat::Csv => tpm_to_csv(t),
        TpmFormat::Json => tpm_to_json(t),
    }
}

/// Reads a TPM file, choosing the format from the extension (`.json`, otherwise CSV).
/// Returns the matrix and the SHA-256 of the file bytes.
pub fn read_tpm(path: &Path) -> CliResult<(Tpm64, String)> {
    let bytes = fs::read(path).map_err(|e| CliError::io(path, e))?;
    let text = String::from_utf8(bytes.clone())
        .map_err(|_| parse_error(&path.display().to_string(), "file is not UTF-8"))?;
    let name = path.display().to_string();
    let t = match TpmFormat::from_path(path) {
        TpmFormat::Csv => parse_tpm_csv(&text, &name)?,
        TpmFormat::Json => parse_tpm_json(&text, &name)?,
    };
    Ok((t, sha256_hex(&bytes)))
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    format!("{:x}", Sha256::digest(bytes))
}

pub fn write_file(path: &Path, contents: &str) -> CliResult<()> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent).map_err(|e| CliError::io(parent, e))?;
    }
    fs::write(path, contents).map_err(|e| CliError::io(path, e))
}
