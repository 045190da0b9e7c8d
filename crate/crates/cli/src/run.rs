//! Analysis pipelines that turn a TPM into a complete set of output files.

use std::path::Path;

use emergence_core::metrics::{PathAggregate, ZeroPaths};
use emergence_core::{
    analyze_capped, branching_greedy, complexity, AnalysisConfig, EmergentHierarchy64, GreedyConfig, MetricsConfig,
    TieBreak, Tpm64,
};

use crate::bundle::{levels_csv, metrics_csv, Bundle, Method};
use crate::dot::hierarchy_dot;
use crate::error::CliResult;
use crate::io::write_file;
use crate::manifest::{InputDigest, RunConfig, RunInfo, RunManifest};

/// Default enumeration limit for exact analysis.
pub const DEFAULT_MAX_STATES: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnalyzeOptions {
    pub epsilon: f64,
    pub max_states: usize,
    pub metrics: MetricsConfig,
}

impl Default for AnalyzeOptions {
    fn default() -> Self {
        Self {
            epsilon: emergence_core::causal::DEFAULT_EPSILON,
            max_states: DEFAULT_MAX_STATES,
            metrics: MetricsConfig::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GreedyOptions {
    pub epsilon: f64,
    pub greedy: GreedyConfig,
    pub metrics: MetricsConfig,
}

impl Default for GreedyOptions {
    fn default() -> Self {
        Self {
            epsilon: emergence_core::causal::DEFAULT_EPSILON,
            greedy: GreedyConfig::default(),
            metrics: MetricsConfig::default(),
        }
    }
}

/// Everything one analysis writes, already rendered.
#[derive(Debug, Clone)]
pub struct Outputs {
    pub bundle: Bundle,
    pub hierarchy: EmergentHierarchy64,
    pub bundle_json: String,
    pub dot: String,
    pub levels_csv: String,
    pub metrics_csv: String,
}

pub const OUTPUT_FILES: [&str; 4] = ["bundle.json", "hierarchy.dot", "levels.csv", "metrics.csv"];

pub fn tie_break_name(t: TieBreak) -> &'static str {
    match t {
        TieBreak::Canonical => "canonical",
        TieBreak::SeededRandom => "seeded",
    }
}

fn aggregate_name(a: PathAggregate) -> &'static str {
    match a {
        PathAggregate::Mean => "mean",
        PathAggregate::Sum => "sum",
    }
}

fn zero_paths_name(z: ZeroPaths) -> &'static str {
    match z {
        ZeroPaths::CountAsZero => "count",
        ZeroPaths::Skip => "skip",
    }
}

fn metrics_config(cfg: &mut RunConfig, m: &MetricsConfig) {
    cfg.sample_size = Some(m.sample_size);
    cfg.metrics_seed = Some(m.seed);
    cfg.path_aggregate = Some(aggregate_name(m.aggregate).into());
    cfg.zero_paths = Some(zero_paths_name(m.zero_paths).into());
}

pub fn analyze_config(opts: &AnalyzeOptions) -> RunConfig {
    let mut cfg = RunConfig {
        epsilon: Some(opts.epsilon),
        max_states: Some(opts.max_states),
        ..RunConfig::default()
    };
    metrics_config(&mut cfg, &opts.metrics);
    cfg
}

pub fn greedy_config(opts: &GreedyOptions) -> RunConfig {
    let mut cfg = RunConfig {
        epsilon: Some(opts.epsilon),
        n_paths: Some(opts.greedy.n_paths()),
        seed: Some(opts.greedy.seed),
        tie_break: Some(tie_break_name(opts.greedy.tie_break).into()),
        ..RunConfig::default()
    };
    metrics_config(&mut cfg, &opts.metrics);
    cfg
}

fn render(bundle: Bundle, hierarchy: EmergentHierarchy64, report: &emergence_core::MetricsReport64) -> Outputs {
    Outputs {
        bundle_json: bundle.to_json(),
        dot: hierarchy_dot(&hierarchy),
        levels_csv: levels_csv(&hierarchy),
        metrics_csv: metrics_csv(None, None, report),
        bundle,
        hierarchy,
    }
}

/// Exhaustive analysis over the whole partition lattice.
pub fn analyze_outputs(t: &Tpm64, opts: &AnalyzeOptions, input: Option<InputDigest>) -> CliResult<Outputs> {
    let cfg = AnalysisConfig::new(opts.epsilon)?;
    let a = analyze_capped(t, &cfg, opts.max_states)?;
    let report = complexity(&a.hierarchy, &opts.metrics)?;
    let run = RunInfo::new("analyze", input, analyze_config(opts));
    let bundle = Bundle::new(Method::Exact, run, &a.cp, &a.delta, &a.hierarchy, &report);
    Ok(render(bundle, a.hierarchy, &report))
}

/// Branching greedy analysis for systems too large to enumerate.
pub fn greedy_outputs(t: &Tpm64, opts: &GreedyOptions, input: Option<InputDigest>) -> CliResult<Outputs> {
    let cfg = AnalysisConfig::new(opts.epsilon)?;
    let g = branching_greedy(t, &opts.greedy)?;
    let h = g.hierarchy(&cfg)?;
    let report = complexity(&h, &opts.metrics)?;
    let run = RunInfo::new("greedy", input, greedy_config(opts));
    let mut bundle = Bundle::new(Method::Greedy, run, &g.sampled_cp, &g.delta, &h, &report);
    bundle.greedy_paths = Some(
        g.paths
            .iter()
            .map(|path| path.iter().map(ToString::to_string).collect())
            .collect(),
    );
    Ok(render(bundle, h, &report))
}

/// Writes the outputs and a manifest (with timestamp) into `dir`.
pub fn write_outputs(dir: &Path, out: &Outputs) -> CliResult<()> {
    write_file(&dir.join("bundle.json"), &out.bundle_json)?;
    write_file(&dir.join("hierarchy.dot"), &out.dot)?;
    write_file(&dir.join("levels.csv"), &out.levels_csv)?;
    write_file(&dir.join("metrics.csv"), &out.metrics_csv)?;
    let manifest = RunManifest::new(
        out.bundle.run.clone(),
        OUTPUT_FILES.iter().map(|s| s.to_string()).collect(),
    );
    write_file(&dir.join("manifest.json"), &manifest.to_json())
}
