//! Command-line interface.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use emergence_core::generators::{garden_example, garden_examples, grow_pa_tpm, pinpoint_tpm, GrowthConfig, Orientation, PinpointSpec};
use emergence_core::metrics::{PathAggregate, ZeroPaths};
use emergence_core::{GreedyConfig, MetricsConfig, TieBreak, Tpm64};

use crate::error::{CliError, CliResult};
use crate::io::{format_tpm, read_tpm, write_file, TpmFormat};
use crate::manifest::{InputDigest, RunConfig, RunInfo, RunManifest};
use crate::run::{analyze_outputs, greedy_outputs, write_outputs, AnalyzeOptions, GreedyOptions, Outputs, DEFAULT_MAX_STATES};
use crate::sweep::{aggregates_csv, orientation_name, run_sweep, runs_csv, Seeding, SweepConfig};

/// Environment variable holding the worker thread count.
pub const THREADS_ENV: &str = "EMERGENCE_THREADS";

#[derive(Debug, Parser)]
#[command(name = "emergence", version, about = "Causal emergence across the scales of a Markov chain")]
#[command(after_help = "Exit codes: 0 success, 2 invalid input, 3 enumeration cap exceeded, 4 some sweep runs failed.\n\
Set EMERGENCE_THREADS to fix the number of worker threads.")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Score every partition of a TPM and extract its emergent hierarchy.
    Analyze(AnalyzeArgs),
    /// Approximate the emergent hierarchy by branching greedy merges.
    Greedy(GreedyArgs),
    /// Write a generated TPM.
    #[command(subcommand)]
    Generate(GenerateCmd),
    /// Grow preferential-attachment networks over an alpha grid and score them.
    Sweep(SweepArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AggregateArg {
    Mean,
    Sum,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ZeroPathsArg {
    /// Paths without positive ΔCP count with entropy 0.
    Count,
    /// Paths without positive ΔCP are left out of the average.
    Skip,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TieBreakArg {
    Canonical,
    Seeded,
}

impl From<TieBreakArg> for TieBreak {
    fn from(t: TieBreakArg) -> Self {
        match t {
            TieBreakArg::Canonical => TieBreak::Canonical,
            TieBreakArg::Seeded => TieBreak::SeededRandom,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OrientationArg {
    /// Grown edges can be walked both ways.
    Undirected,
    /// New nodes point at older ones; sinks get self-loops.
    NewToOld,
}

impl From<OrientationArg> for Orientation {
    fn from(o: OrientationArg) -> Self {
        match o {
            OrientationArg::Undirected => Orientation::Undirected,
            OrientationArg::NewToOld => Orientation::NewToOld,
        }
    }
}

#[derive(Debug, Args)]
pub struct MetricsArgs {
    /// Paths drawn per hierarchy when there are more than this many.
    #[arg(long, default_value_t = emergence_core::metrics::DEFAULT_PATH_SAMPLES)]
    pub sample_size: usize,
    /// Seed of the path sampler.
    #[arg(long, default_value_t = 0)]
    pub metrics_seed: u64,
    #[arg(long, value_enum, default_value_t = AggregateArg::Mean)]
    pub path_aggregate: AggregateArg,
    #[arg(long, value_enum, default_value_t = ZeroPathsArg::Count)]
    pub zero_paths: ZeroPathsArg,
}

impl MetricsArgs {
    fn config(&self) -> MetricsConfig {
        MetricsConfig {
            sample_size: self.sample_size,
            seed: self.metrics_seed,
            aggregate: match self.path_aggregate {
                AggregateArg::Mean => PathAggregate::Mean,
                AggregateArg::Sum => PathAggregate::Sum,
            },
            zero_paths: match self.zero_paths {
                ZeroPathsArg::Count => ZeroPaths::CountAsZero,
                ZeroPathsArg::Skip => ZeroPaths::Skip,
            },
            ..MetricsConfig::default()
        }
    }
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    /// TPM file (`.csv` headerless rows, or `.json`).
    pub input: PathBuf,
    /// Output directory.
    #[arg(long, short, default_value = "emergence-out")]
    pub out: PathBuf,
    /// Minimum ΔCP for a scale to count as emergent.
    #[arg(long, default_value_t = emergence_core::causal::DEFAULT_EPSILON)]
    pub epsilon: f64,
    /// Largest state count analyzed exhaustively.
    #[arg(long, default_value_t = DEFAULT_MAX_STATES)]
    pub max_states: usize,
    #[command(flatten)]
    pub metrics: MetricsArgs,
}

#[derive(Debug, Args)]
pub struct GreedyArgs {
    pub input: PathBuf,
    #[arg(long, short, default_value = "emergence-out")]
    pub out: PathBuf,
    /// Best merges branched into full completions at each level.
    #[arg(long, default_value_t = emergence_core::greedy::DEFAULT_N_PATHS)]
    pub n_paths: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = TieBreakArg::Canonical)]
    pub tie_break: TieBreakArg,
    #[arg(long, default_value_t = emergence_core::causal::DEFAULT_EPSILON)]
    pub epsilon: f64,
    #[command(flatten)]
    pub metrics: MetricsArgs,
}

#[derive(Debug, Args)]
pub struct TpmOut {
    /// Destination file; standard output when absent.
    #[arg(long, short)]
    pub out: Option<PathBuf>,
    /// Defaults to the extension of --out, else CSV.
    #[arg(long, value_enum)]
    pub format: Option<TpmFormat>,
}

#[derive(Debug, Subcommand)]
pub enum GenerateCmd {
    /// Preferential-attachment growth turned into a random walk.
    Pa {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        m: usize,
        #[arg(long)]
        alpha: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = OrientationArg::Undirected)]
        orientation: OrientationArg,
        #[command(flatten)]
        out: TpmOut,
    },
    /// Disjoint diffusion cycles with a single designed macroscale.
    Pinpoint {
        /// Comma-separated cycle sizes.
        #[arg(long, value_delimiter = ',', required = true)]
        cycles: Vec<usize>,
        /// Extra fixed states after the cycles.
        #[arg(long, default_value_t = 0)]
        singletons: usize,
        #[arg(long, default_value_t = emergence_core::generators::DEFAULT_STAY_PROB)]
        stay: f64,
        #[command(flatten)]
        out: TpmOut,
    },
    /// Hand-built example systems.
    Garden {
        /// Fixture name; see --list.
        #[arg(long, required_unless_present_any = ["all", "list"])]
        name: Option<String>,
        /// Write every fixture into the --out directory.
        #[arg(long, requires = "out")]
        all: bool,
        /// Print the fixture names and construction rules.
        #[arg(long)]
        list: bool,
        #[command(flatten)]
        out: TpmOut,
    },
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long, value_delimiter = ',', default_values_t = crate::sweep::DEFAULT_ALPHA_GRID)]
    pub alpha_grid: Vec<f64>,
    #[arg(long, default_value_t = 5)]
    pub replicates: usize,
    #[arg(long, default_value_t = 40)]
    pub n_nodes: usize,
    #[arg(long, default_value_t = 1)]
    pub m: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = Seeding::Paired)]
    pub seeding: Seeding,
    #[arg(long, value_enum, default_value_t = OrientationArg::Undirected)]
    pub orientation: OrientationArg,
    #[arg(long, default_value_t = emergence_core::greedy::DEFAULT_N_PATHS)]
    pub n_paths: usize,
    #[arg(long, value_enum, default_value_t = TieBreakArg::Canonical)]
    pub tie_break: TieBreakArg,
    #[arg(long, default_value_t = emergence_core::metrics::DEFAULT_PATH_SAMPLES)]
    pub sample_size: usize,
    #[arg(long, default_value_t = emergence_core::causal::DEFAULT_EPSILON)]
    pub epsilon: f64,
    #[arg(long, short, default_value = "sweep-out")]
    pub out: PathBuf,
}

fn digest(path: &Path, sha256: String) -> InputDigest {
    InputDigest {
        name: path.file_name().map_or_else(|| path.display().to_string(), |n| n.to_string_lossy().into_owned()),
        sha256,
    }
}

fn summary(out: &Outputs, dir: &Path) -> String {
    let b = &out.bundle;
    format!(
        "{} states, micro CP {:.4}, {} emergent scales, complexity {:.4}; wrote {}",
        b.n,
        b.micro_cp,
        b.members.len(),
        b.metrics.complexity,
        dir.display()
    )
}

fn emit_tpm(t: &Tpm64, out: &TpmOut, run: RunInfo) -> CliResult<()> {
    let format = out
        .format
        .or_else(|| out.out.as_deref().map(TpmFormat::from_path))
        .unwrap_or(TpmFormat::Csv);
    let text = format_tpm(t, format);
    match &out.out {
        Some(path) => {
            write_file(path, &text)?;
            let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
            let manifest = RunManifest::new(run, vec![name.clone()]);
            write_file(&path.with_file_name(format!("{name}.manifest.json")), &manifest.to_json())
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn generate(cmd: &GenerateCmd) -> CliResult<()> {
    match cmd {
        GenerateCmd::Pa { n, m, alpha, seed, orientation, out } => {
            let cfg = GrowthConfig {
                orientation: (*orientation).into(),
                ..GrowthConfig::new(*n, *m, *alpha, *seed)
            };
            let t: Tpm64 = grow_pa_tpm(&cfg)?;
            let run = RunInfo::new(
                "generate pa",
                None,
                RunConfig {
                    generator: Some("pa".into()),
                    n_nodes: Some(*n),
                    m: Some(*m),
                    alpha_grid: Some(vec![*alpha]),
                    seed: Some(*seed),
                    orientation: Some(orientation_name(cfg.orientation).into()),
                    ..RunConfig::default()
                },
            );
            emit_tpm(&t, out, run)
        }
        GenerateCmd::Pinpoint { cycles, singletons, stay, out } => {
            let spec = PinpointSpec {
                cycles: cycles.clone(),
                singletons: *singletons,
                stay_prob: *stay,
                step_prob: 1.0 - stay,
            };
            let t: Tpm64 = pinpoint_tpm(&spec)?;
            let run = RunInfo::new(
                "generate pinpoint",
                None,
                RunConfig {
                    generator: Some(format!(
                        "pinpoint cycles={} singletons={singletons} stay={stay}",
                        cycles.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
                    )),
                    ..RunConfig::default()
                },
            );
            emit_tpm(&t, out, run)
        }
        GenerateCmd::Garden { name, all, list, out } => {
            if *list {
                for f in garden_examples::<f64>() {
                    println!("{:<20} {:>2} states  {}", f.name, f.tpm.n(), f.rule);
                }
                return Ok(());
            }
            let run = |name: &str| {
                RunInfo::new(
                    "generate garden",
                    None,
                    RunConfig {
                        generator: Some(format!("garden {name}")),
                        ..RunConfig::default()
                    },
                )
            };
            if *all {
                let dir = out.out.as_ref().expect("clap enforces --out with --all");
                let ext = match out.format.unwrap_or(TpmFormat::Csv) {
                    TpmFormat::Csv => "csv",
                    TpmFormat::Json => "json",
                };
                for f in garden_examples::<f64>() {
                    let target = TpmOut {
                        out: Some(dir.join(format!("{}.{ext}", f.name))),
                        format: out.format,
                    };
                    emit_tpm(&f.tpm, &target, run(f.name))?;
                }
                return Ok(());
            }
            let name = name.as_deref().expect("clap enforces --name");
            let f = garden_example::<f64>(name).map_err(|_| {
                CliError::Validation(format!(
                    "unknown garden fixture {name:?}; known: {}",
                    emergence_core::generators::GARDEN_NAMES.join(", ")
                ))
            })?;
            emit_tpm(&f.tpm, out, run(name))
        }
    }
}

fn sweep(args: &SweepArgs) -> CliResult<()> {
    let cfg = SweepConfig {
        alphas: args.alpha_grid.clone(),
        replicates: args.replicates,
        n_nodes: args.n_nodes,
        m: args.m,
        seed: args.seed,
        seeding: args.seeding,
        orientation: args.orientation.into(),
        n_paths: args.n_paths,
        tie_break: args.tie_break.into(),
        sample_size: args.sample_size,
        epsilon: args.epsilon,
    };
    let out = run_sweep(&cfg)?;
    write_file(&args.out.join("runs.csv"), &runs_csv(&out))?;
    write_file(&args.out.join("aggregates.csv"), &aggregates_csv(&out))?;
    let manifest = RunManifest::new(
        RunInfo::new("sweep", None, cfg.run_config()),
        vec!["runs.csv".into(), "aggregates.csv".into()],
    );
    write_file(&args.out.join("manifest.json"), &manifest.to_json())?;
    for r in out.runs.iter().filter(|r| r.result.is_err()) {
        eprintln!("run alpha={} replicate={} failed: {}", r.alpha, r.replicate, r.result.as_ref().unwrap_err());
    }
    println!("{} runs, {} failed; wrote {}", out.runs.len(), out.failures(), args.out.display());
    match out.failures() {
        0 => Ok(()),
        failed => Err(CliError::PartialSweep {
            failed,
            total: out.runs.len(),
        }),
    }
}

/// Runs a parsed command.
pub fn execute(cli: &Cli) -> CliResult<()> {
    match &cli.command {
        Command::Analyze(a) => {
            let (t, sha) = read_tpm(&a.input)?;
            if t.n() > DEFAULT_MAX_STATES && t.n() <= a.max_states {
                eprintln!(
                    "warning: {} states exceed the default limit of {DEFAULT_MAX_STATES}; exhaustive analysis may be slow",
                    t.n()
                );
            }
            let opts = AnalyzeOptions {
                epsilon: a.epsilon,
                max_states: a.max_states,
                metrics: a.metrics.config(),
            };
            let out = analyze_outputs(&t, &opts, Some(digest(&a.input, sha)))?;
            write_outputs(&a.out, &out)?;
            println!("{}", summary(&out, &a.out));
            Ok(())
        }
        Command::Greedy(g) => {
            let (t, sha) = read_tpm(&g.input)?;
            let opts = GreedyOptions {
                epsilon: g.epsilon,
                greedy: GreedyConfig::new(g.n_paths, g.seed, g.tie_break.into())?,
                metrics: g.metrics.config(),
            };
            let out = greedy_outputs(&t, &opts, Some(digest(&g.input, sha)))?;
            write_outputs(&g.out, &out)?;
            println!("{}", summary(&out, &g.out));
            Ok(())
        }
        Command::Generate(cmd) => generate(cmd),
        Command::Sweep(s) => sweep(s),
    }
}

/// Sizes the global worker pool from [`THREADS_ENV`] when it is set.
pub fn configure_threads() -> CliResult<()> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Validation(format!("{THREADS_ENV} must be a positive integer, got {raw:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Validation(e.to_string()))
}
