//! Result bundles: everything an analysis produced, as JSON and tidy CSV.

use std::collections::BTreeMap;

use emergence_core::apportion::PartitionMap;
use emergence_core::{EmergentHierarchy64, MetricsReport64};
use serde::{Deserialize, Serialize};

use crate::manifest::RunInfo;

pub const BUNDLE_SCHEMA: &str = "emergence.bundle/v1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Exact,
    Greedy,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScaleEntry {
    pub partition: String,
    pub level: usize,
    pub cp: f64,
    pub delta_cp: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsJson {
    pub s_path: f64,
    pub n_paths_used: usize,
    pub total_paths: u128,
    pub s_row: f64,
    pub row_negentropy: f64,
    pub complexity: f64,
    pub micro_dim: usize,
    pub n_emergent_nodes: usize,
    /// Mean ΔCP of the contributing scales per level, levels `1..=L`.
    pub level_means: Vec<f64>,
    pub level_centroid: Option<f64>,
}

impl From<&MetricsReport64> for MetricsJson {
    fn from(r: &MetricsReport64) -> Self {
        Self {
            s_path: r.s_path,
            n_paths_used: r.n_paths_used,
            total_paths: r.total_paths,
            s_row: r.s_row,
            row_negentropy: r.row_negentropy,
            complexity: r.complexity,
            micro_dim: r.micro_dim,
            n_emergent_nodes: r.n_emergent_nodes,
            level_means: r.level_means.clone(),
            level_centroid: r.level_centroid,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Bundle {
    pub schema: String,
    pub method: Method,
    pub run: RunInfo,
    pub n: usize,
    pub micro_cp: f64,
    pub anchor: ScaleEntry,
    /// Emergent scales other than the anchor, coarsest level first.
    pub members: Vec<ScaleEntry>,
    /// CP of every scored partition, keyed by block notation.
    pub cp: BTreeMap<String, f64>,
    pub delta_cp: BTreeMap<String, f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub greedy_paths: Option<Vec<Vec<String>>>,
    pub metrics: MetricsJson,
}

fn keyed(map: &PartitionMap<f64>) -> BTreeMap<String, f64> {
    map.iter().map(|(p, v)| (p.to_string(), v)).collect()
}

impl Bundle {
    pub fn new(
        method: Method,
        run: RunInfo,
        cp: &PartitionMap<f64>,
        delta: &PartitionMap<f64>,
        h: &EmergentHierarchy64,
        metrics: &MetricsReport64,
    ) -> Self {
        let entry = |p: &emergence_core::Partition, d: f64| ScaleEntry {
            partition: p.to_string(),
            level: p.num_blocks(),
            cp: cp.get(p).expect("every hierarchy node is scored"),
            delta_cp: d,
        };
        let anchor = entry(h.anchor(), h.anchor_delta());
        Self {
            schema: BUNDLE_SCHEMA.to_string(),
            method,
            run,
            n: h.micro_dim(),
            micro_cp: anchor.cp,
            anchor,
            members: h.members().iter().map(|(p, d)| entry(p, *d)).collect(),
            cp: keyed(cp),
            delta_cp: keyed(delta),
            greedy_paths: None,
            metrics: MetricsJson::from(metrics),
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("bundle values are finite");
        s.push('\n');
        s
    }
}

/// Per-level profile: level, contributing scales, mean and total ΔCP.
pub fn levels_csv(h: &EmergentHierarchy64) -> String {
    let mut out = String::from("level,members,mean_delta_cp,total_delta_cp\n");
    for l in 1..=h.micro_dim() {
        let row = h.per_level().get(&l).map(Vec::as_slice).unwrap_or(&[]);
        let total = row.iter().fold(0.0, |acc, (_, d)| acc + d);
        let mean = if row.is_empty() { 0.0 } else { total / row.len() as f64 };
        out.push_str(&format!("{l},{},{mean},{total}\n", row.len()));
    }
    out
}

pub const METRICS_HEADER: &str =
    "alpha,seed,s_path,s_row,row_negentropy,complexity,n_emergent_nodes,level_centroid,level_means";

/// One CSV row of a [`MetricsReport64`]; `level_means` is `;`-separated.
pub fn metrics_row(alpha: Option<f64>, seed: Option<u64>, r: &MetricsReport64) -> String {
    let opt = |v: Option<String>| v.unwrap_or_default();
    let means: Vec<String> = r.level_means.iter().map(f64::to_string).collect();
    format!(
        "{},{},{},{},{},{},{},{},{}",
        opt(alpha.map(|a| a.to_string())),
        opt(seed.map(|s| s.to_string())),
        r.s_path,
        r.s_row,
        r.row_negentropy,
        r.complexity,
        r.n_emergent_nodes,
        opt(r.level_centroid.map(|c| c.to_string())),
        means.join(";"),
    )
}

pub fn metrics_csv(alpha: Option<f64>, seed: Option<u64>, r: &MetricsReport64) -> String {
    format!("{METRICS_HEADER}\n{}\n", metrics_row(alpha, seed, r))
}
