//! Parameter sweep over the preferential-attachment exponent.

use emergence_core::generators::{grow_pa_tpm, GrowthConfig, Orientation};
use emergence_core::{branching_greedy, complexity, AnalysisConfig, GreedyConfig, MetricsConfig, MetricsReport64, TieBreak, Tpm64};
use rayon::prelude::*;

use crate::bundle::{metrics_row, METRICS_HEADER};
use crate::error::{CliError, CliResult};
use crate::manifest::RunConfig;
use crate::run::tie_break_name;

pub const DEFAULT_ALPHA_GRID: [f64; 5] = [0.5, 1.0, 1.5, 2.0, 2.5];

/// How replicate seeds relate across values of alpha.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Seeding {
    /// Replicate `r` uses the same seed at every alpha.
    #[default]
    Paired,
    /// Every (alpha, replicate) pair gets its own seed.
    Independent,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub alphas: Vec<f64>,
    pub replicates: usize,
    pub n_nodes: usize,
    pub m: usize,
    pub seed: u64,
    pub seeding: Seeding,
    pub orientation: Orientation,
    pub n_paths: usize,
    pub tie_break: TieBreak,
    pub sample_size: usize,
    pub epsilon: f64,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            alphas: DEFAULT_ALPHA_GRID.to_vec(),
            replicates: 5,
            n_nodes: 40,
            m: 1,
            seed: 0,
            seeding: Seeding::Paired,
            orientation: Orientation::default(),
            n_paths: emergence_core::greedy::DEFAULT_N_PATHS,
            tie_break: TieBreak::Canonical,
            sample_size: emergence_core::metrics::DEFAULT_PATH_SAMPLES,
            epsilon: emergence_core::causal::DEFAULT_EPSILON,
        }
    }
}

impl SweepConfig {
    pub fn run_config(&self) -> RunConfig {
        RunConfig {
            epsilon: Some(self.epsilon),
            n_paths: Some(self.n_paths),
            seed: Some(self.seed),
            tie_break: Some(tie_break_name(self.tie_break).into()),
            sample_size: Some(self.sample_size),
            alpha_grid: Some(self.alphas.clone()),
            replicates: Some(self.replicates),
            n_nodes: Some(self.n_nodes),
            m: Some(self.m),
            seeding: Some(format!("{:?}", self.seeding).to_lowercase()),
            orientation: Some(orientation_name(self.orientation).into()),
            ..RunConfig::default()
        }
    }
}

pub fn orientation_name(o: Orientation) -> &'static str {
    match o {
        Orientation::Undirected => "undirected",
        Orientation::NewToOld => "new-to-old",
    }
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

/// Seed of one run; used for growth, greedy tie-breaking and path sampling alike.
pub fn replicate_seed(base: u64, alpha_index: usize, replicate: usize, seeding: Seeding) -> u64 {
    let a = match seeding {
        Seeding::Paired => 0,
        Seeding::Independent => alpha_index as u64 + 1,
    };
    splitmix64(splitmix64(base ^ splitmix64(a)) ^ replicate as u64)
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunRow {
    pub alpha: f64,
    pub replicate: usize,
    pub seed: u64,
    pub result: Result<MetricsReport64, String>,
}

/// Mean and standard error of one quantity over the successful replicates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Stat {
    pub mean: f64,
    /// `None` with fewer than two values.
    pub se: Option<f64>,
}

impl Stat {
    pub fn of(values: &[f64]) -> Option<Self> {
        let k = values.len();
        if k == 0 {
            return None;
        }
        let mean = values.iter().sum::<f64>() / k as f64;
        let se = (k > 1).then(|| {
            let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (k - 1) as f64;
            (var / k as f64).sqrt()
        });
        Some(Self { mean, se })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AggregateRow {
    pub alpha: f64,
    pub runs_ok: usize,
    pub runs_failed: usize,
    pub s_path: Option<Stat>,
    pub s_row: Option<Stat>,
    pub row_negentropy: Option<Stat>,
    pub complexity: Option<Stat>,
    pub n_emergent_nodes: Option<Stat>,
    pub level_centroid: Option<Stat>,
    /// Replicate average of the per-level mean ΔCP profile.
    pub level_means: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepOutput {
    pub runs: Vec<RunRow>,
    pub aggregates: Vec<AggregateRow>,
}

impl SweepOutput {
    pub fn failures(&self) -> usize {
        self.runs.iter().filter(|r| r.result.is_err()).count()
    }
}

fn one_run(cfg: &SweepConfig, alpha: f64, seed: u64) -> emergence_core::Result<MetricsReport64> {
    let growth = GrowthConfig {
        orientation: cfg.orientation,
        ..GrowthConfig::new(cfg.n_nodes, cfg.m, alpha, seed)
    };
    let t: Tpm64 = grow_pa_tpm(&growth)?;
    let g = branching_greedy(&t, &GreedyConfig::new(cfg.n_paths, seed, cfg.tie_break)?)?;
    let h = g.hierarchy(&AnalysisConfig::new(cfg.epsilon)?)?;
    complexity(
        &h,
        &MetricsConfig {
            sample_size: cfg.sample_size,
            seed,
            ..MetricsConfig::default()
        },
    )
}

fn aggregate(alpha: f64, rows: &[&RunRow]) -> AggregateRow {
    let ok: Vec<&MetricsReport64> = rows.iter().filter_map(|r| r.result.as_ref().ok()).collect();
    let stat = |f: &dyn Fn(&MetricsReport64) -> Option<f64>| Stat::of(&ok.iter().filter_map(|r| f(r)).collect::<Vec<_>>());
    let width = ok.iter().map(|r| r.level_means.len()).max().unwrap_or(0);
    let level_means = (0..width)
        .map(|l| {
            let vals: Vec<f64> = ok.iter().filter_map(|r| r.level_means.get(l).copied()).collect();
            vals.iter().sum::<f64>() / vals.len().max(1) as f64
        })
        .collect();
    AggregateRow {
        alpha,
        runs_ok: ok.len(),
        runs_failed: rows.len() - ok.len(),
        s_path: stat(&|r| Some(r.s_path)),
        s_row: stat(&|r| Some(r.s_row)),
        row_negentropy: stat(&|r| Some(r.row_negentropy)),
        complexity: stat(&|r| Some(r.complexity)),
        n_emergent_nodes: stat(&|r| Some(r.n_emergent_nodes as f64)),
        level_centroid: stat(&|r| r.level_centroid),
        level_means,
    }
}

/// Grows, analyzes and scores every (alpha, replicate) run in parallel.
///
/// Failed runs are kept as rows with their error; the output order is fixed
/// by the grid, not by completion.
pub fn run_sweep(cfg: &SweepConfig) -> CliResult<SweepOutput> {
    if cfg.alphas.is_empty() || cfg.replicates == 0 {
        return Err(CliError::Validation("the sweep needs at least one alpha and one replicate".into()));
    }
    if let Some(a) = cfg.alphas.iter().find(|a| !a.is_finite() || **a < 0.0) {
        return Err(CliError::Validation(format!("alpha must be finite and non-negative, got {a}")));
    }
    AnalysisConfig::new(cfg.epsilon)?;
    GreedyConfig::new(cfg.n_paths, 0, cfg.tie_break)?;
    let jobs: Vec<(usize, f64, usize)> = cfg
        .alphas
        .iter()
        .enumerate()
        .flat_map(|(i, &a)| (0..cfg.replicates).map(move |r| (i, a, r)))
        .collect();
    let runs: Vec<RunRow> = jobs
        .par_iter()
        .map(|&(i, alpha, replicate)| {
            let seed = replicate_seed(cfg.seed, i, replicate, cfg.seeding);
            RunRow {
                alpha,
                replicate,
                seed,
                result: one_run(cfg, alpha, seed).map_err(|e| e.to_string()),
            }
        })
        .collect();
    let aggregates = cfg
        .alphas
        .iter()
        .map(|&a| {
            let rows: Vec<&RunRow> = runs.iter().filter(|r| r.alpha.to_bits() == a.to_bits()).collect();
            aggregate(a, &rows)
        })
        .collect();
    Ok(SweepOutput { runs, aggregates })
}

/// One row per run; failed runs carry their error and empty metric cells.
pub fn runs_csv(out: &SweepOutput) -> String {
    let mut s = format!("replicate,status,error,{METRICS_HEADER}\n");
    for r in &out.runs {
        match &r.result {
            Ok(report) => s.push_str(&format!(
                "{},ok,,{}\n",
                r.replicate,
                metrics_row(Some(r.alpha), Some(r.seed), report)
            )),
            Err(e) => s.push_str(&format!(
                "{},failed,\"{}\",{},{},,,,,,,\n",
                r.replicate,
                e.replace('"', "'"),
                r.alpha,
                r.seed
            )),
        }
    }
    s
}

pub fn aggregates_csv(out: &SweepOutput) -> String {
    let names = ["s_path", "s_row", "row_negentropy", "complexity", "n_emergent_nodes", "level_centroid"];
    let mut s = String::from("alpha,runs_ok,runs_failed");
    for n in names {
        s.push_str(&format!(",{n}_mean,{n}_se"));
    }
    s.push_str(",level_means\n");
    let cell = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
    for a in &out.aggregates {
        s.push_str(&format!("{},{},{}", a.alpha, a.runs_ok, a.runs_failed));
        for st in [a.s_path, a.s_row, a.row_negentropy, a.complexity, a.n_emergent_nodes, a.level_centroid] {
            s.push_str(&format!(",{},{}", cell(st.map(|x| x.mean)), cell(st.and_then(|x| x.se))));
        }
        let means: Vec<String> = a.level_means.iter().map(f64::to_string).collect();
        s.push_str(&format!(",{}\n", means.join(";")));
    }
    s
}
