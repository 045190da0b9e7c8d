use std::path::Path;
use std::process::Command;

use emergence_cli::bundle::{Bundle, Method, BUNDLE_SCHEMA};
use emergence_cli::cli::Cli;
use emergence_cli::dot::{diagram_dot, hierarchy_dot};
use emergence_cli::io::{parse_tpm_csv, parse_tpm_json, tpm_to_csv, tpm_to_json};
use emergence_cli::run::{analyze_outputs, greedy_outputs, AnalyzeOptions, GreedyOptions};
use emergence_cli::sweep::{aggregates_csv, replicate_seed, run_sweep, runs_csv, Seeding, SweepConfig};
use emergence_core::generators::{garden_example, pinpoint_tpm, PinpointSpec};
use emergence_core::{analyze, build_hasse, AnalysisConfig, GreedyConfig, Partition, TieBreak, Tpm64};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_emergence"));
    c.env_remove("EMERGENCE_THREADS");
    c
}

fn run(args: &[&str]) -> (i32, String, String) {
    let out = bin().args(args).output().unwrap();
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).into_owned(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn read(path: &Path) -> String {
    std::fs::read_to_string(path).unwrap()
}

/// Small structural check of the DOT subset the exporter emits.
fn dot_nodes_and_edges(dot: &str) -> (usize, usize) {
    let body = dot.trim();
    assert!(body.starts_with("digraph ") && body.ends_with('}'));
    assert_eq!(body.matches('{').count(), body.matches('}').count());
    let (mut nodes, mut edges) = (0, 0);
    for line in body.lines().skip(1) {
        let line = line.trim();
        if line == "}" || line.starts_with("rankdir") || line.starts_with("node [") {
            continue;
        }
        assert!(line.ends_with(';'), "statement without terminator: {line}");
        if line.contains("->") {
            let (a, b) = line.trim_end_matches(';').split_once("->").unwrap();
            assert!(a.trim().starts_with('n') && b.trim().starts_with('n'));
            edges += 1;
        } else {
            assert!(line.starts_with('n') && line.contains(" [") && line.ends_with("];"), "{line}");
            assert_eq!(line.matches('"').count() % 2, 0);
            nodes += 1;
        }
    }
    (nodes, edges)
}

#[test]
fn uniform_system_has_nothing_to_report() {
    let out = analyze_outputs(&Tpm64::uniform(4), &AnalyzeOptions::default(), None).unwrap();
    assert!(out.bundle.members.is_empty());
    assert_eq!(out.bundle.metrics.complexity, 0.0);
    assert_eq!(dot_nodes_and_edges(&out.dot), (1, 0));
}

#[test]
fn pinpoint_dot_has_anchor_and_one_scale() {
    let t: Tpm64 = pinpoint_tpm(&PinpointSpec::disjoint_cycles(vec![6, 1])).unwrap();
    let out = analyze_outputs(&t, &AnalyzeOptions::default(), None).unwrap();
    assert_eq!(out.bundle.members.len(), 1);
    assert_eq!(dot_nodes_and_edges(&out.dot), (2, 1));
}

#[test]
fn source_cycle_sink_bundle_and_exports() {
    let t = garden_example::<f64>("source-cycle-sink").unwrap().tpm;
    let out = analyze_outputs(&t, &AnalyzeOptions::default(), None).unwrap();
    assert_eq!(out.bundle.members.len(), 5);
    assert_eq!(out.bundle.cp.len(), 52);
    assert_eq!(dot_nodes_and_edges(&out.dot).0, 6);
    let back: Bundle = serde_json::from_str(&out.bundle_json).unwrap();
    assert_eq!(back, out.bundle);
    assert_eq!(back.schema, BUNDLE_SCHEMA);
    assert_eq!(back.method, Method::Exact);

    let levels: Vec<&str> = out.levels_csv.lines().collect();
    assert_eq!(levels.len(), 1 + 5);
    assert!(!out.levels_csv.contains("-0"));
    let metrics: Vec<&str> = out.metrics_csv.lines().collect();
    assert_eq!(metrics.len(), 2);
    assert_eq!(metrics[0].split(',').count(), metrics[1].split(',').count());
}

#[test]
fn two_node_diagram_dot() {
    let d = build_hasse([Partition::finest(2), Partition::coarsest(2)]).unwrap();
    assert_eq!(dot_nodes_and_edges(&diagram_dot(&d)), (2, 1));
    let h = analyze(&Tpm64::identity(2), &AnalysisConfig::default()).unwrap().hierarchy;
    let dot = hierarchy_dot(&h);
    assert!(dot.contains("rankdir=BT"));
    assert!(dot.contains("width=2.0000"));
}

#[test]
fn greedy_with_many_paths_finds_exact_maximum() {
    let t = garden_example::<f64>("noisy-pairs").unwrap().tpm;
    let exact = analyze_outputs(&t, &AnalyzeOptions::default(), None).unwrap();
    let opts = GreedyOptions {
        greedy: GreedyConfig::new(20, 0, TieBreak::Canonical).unwrap(),
        ..GreedyOptions::default()
    };
    let greedy = greedy_outputs(&t, &opts, None).unwrap();
    let max = |b: &Bundle| b.cp.values().copied().fold(f64::MIN, f64::max);
    assert_eq!(max(&greedy.bundle), max(&exact.bundle));
    assert_eq!(greedy.bundle.method, Method::Greedy);
    assert!(greedy.bundle.greedy_paths.as_ref().unwrap().len() > 1);
}

#[test]
fn default_branching_is_three() {
    use clap::Parser;
    let cli = Cli::try_parse_from(["emergence", "greedy", "x.csv"]).unwrap();
    match cli.command {
        emergence_cli::cli::Command::Greedy(g) => assert_eq!(g.n_paths, 3),
        _ => unreachable!(),
    }
    let cli = Cli::try_parse_from(["emergence", "analyze", "x.csv"]).unwrap();
    match cli.command {
        emergence_cli::cli::Command::Analyze(a) => assert_eq!(a.max_states, 10),
        _ => unreachable!(),
    }
}

#[test]
fn tpm_text_formats_round_trip() {
    let t = garden_example::<f64>("modules").unwrap().tpm;
    assert_eq!(parse_tpm_csv(&tpm_to_csv(&t), "t").unwrap().as_slice(), t.as_slice());
    let labelled = t.clone().with_labels((0..8).map(|i| format!("s{i}")).collect()).unwrap();
    let back = parse_tpm_json(&tpm_to_json(&labelled), "t").unwrap();
    assert_eq!(back.as_slice(), t.as_slice());
    assert_eq!(back.labels(), labelled.labels());
}

#[test]
fn parse_errors_name_the_line() {
    let e = parse_tpm_csv("1,0\n0.5,0.6\n", "m.csv").unwrap_err().to_string();
    assert!(e.contains("m.csv") && e.contains("line 2"), "{e}");
    let e = parse_tpm_csv("1,0\n0,-1\n", "m.csv").unwrap_err().to_string();
    assert!(e.contains("line 2, column 2"), "{e}");
    let e = parse_tpm_csv("# comment\n1,0\n0,1,0\n", "m.csv").unwrap_err().to_string();
    assert!(e.contains("line 3"), "{e}");
    assert!(parse_tpm_csv("", "m.csv").is_err());
    assert!(parse_tpm_csv("# header\n0,1\n\n1,0\n", "m.csv").is_ok());
}

#[test]
fn generate_commands_write_valid_matrices() {
    let dir = tempfile::tempdir().unwrap();
    let pa = dir.path().join("pa.csv");
    let (code, _, err) = run(&["generate", "pa", "--n", "40", "--m", "1", "--alpha", "1.0", "--seed", "7", "-o", p(&pa)]);
    assert_eq!(code, 0, "{err}");
    let t = parse_tpm_csv(&read(&pa), "pa").unwrap();
    assert_eq!(t.n(), 40);
    assert!(dir.path().join("pa.csv.manifest.json").exists());

    let (code, stdout, _) = run(&["generate", "pinpoint", "--cycles", "3,2,2"]);
    assert_eq!(code, 0);
    assert_eq!(parse_tpm_csv(&stdout, "stdout").unwrap().n(), 7);

    let (code, stdout, _) = run(&["generate", "garden", "--name", "source-cycle-sink", "--format", "json"]);
    assert_eq!(code, 0);
    assert_eq!(parse_tpm_json(&stdout, "stdout").unwrap().n(), 5);

    let (code, _, _) = run(&["generate", "garden", "--all", "-o", p(&dir.path().join("garden"))]);
    assert_eq!(code, 0);
    assert!(dir.path().join("garden/two-cycles.csv").exists());

    let (code, _, err) = run(&["generate", "garden", "--name", "nope"]);
    assert_eq!(code, 2);
    assert!(err.contains("source-cycle-sink"));
}

#[test]
fn analyze_and_greedy_runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("pa.csv");
    run(&["generate", "pa", "--n", "16", "--alpha", "1.5", "--seed", "2", "-o", p(&input)]);
    for cmd in ["greedy", "analyze"] {
        let extra: &[&str] = if cmd == "analyze" { &["--max-states", "8"] } else { &["--seed", "5", "--tie-break", "seeded"] };
        let small = dir.path().join("small.csv");
        std::fs::write(&small, tpm_to_csv(&garden_example::<f64>("modules").unwrap().tpm)).unwrap();
        let target = if cmd == "analyze" { &small } else { &input };
        let mut bundles = Vec::new();
        for (i, threads) in ["1", "4"].iter().enumerate() {
            let out = dir.path().join(format!("{cmd}{i}"));
            let mut args = vec![cmd, p(target), "-o", p(&out)];
            args.extend_from_slice(extra);
            let status = bin().env("EMERGENCE_THREADS", threads).env("SOURCE_DATE_EPOCH", "0").args(&args).status().unwrap();
            assert!(status.success());
            bundles.push(read(&out.join("bundle.json")));
            let manifest = read(&out.join("manifest.json"));
            assert!(manifest.contains("\"timestamp\": \"1970-01-01T00:00:00Z\""));
            for f in ["hierarchy.dot", "levels.csv", "metrics.csv"] {
                assert!(out.join(f).exists());
            }
        }
        assert_eq!(bundles[0], bundles[1], "{cmd}");
    }
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let big = dir.path().join("big.csv");
    std::fs::write(&big, tpm_to_csv(&Tpm64::uniform(11))).unwrap();
    let (code, _, err) = run(&["analyze", p(&big), "-o", p(&dir.path().join("o"))]);
    assert_eq!(code, 3);
    assert!(err.contains("greedy"));

    let bad = dir.path().join("bad.csv");
    std::fs::write(&bad, "0.5,0.4\n0,1\n").unwrap();
    assert_eq!(run(&["analyze", p(&bad)]).0, 2);
    assert_eq!(run(&["analyze", p(&dir.path().join("missing.csv"))]).0, 2);

    let status = bin()
        .env("EMERGENCE_THREADS", "zero")
        .args(["generate", "garden", "--list"])
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(2));

    // one node cannot grow a network, so every run fails
    let (code, _, err) = run(&["sweep", "--n-nodes", "1", "--replicates", "2", "--alpha-grid", "1", "-o", p(&dir.path().join("s"))]);
    assert_eq!(code, 4, "{err}");
    let runs = read(&dir.path().join("s/runs.csv"));
    let widths: Vec<usize> = runs.lines().map(|l| l.split(',').count()).collect();
    assert!(widths.iter().all(|&w| w == widths[0]), "{runs}");
}

#[test]
fn sweep_grid_shape() {
    let cfg = SweepConfig {
        n_nodes: 12,
        ..SweepConfig::default()
    };
    let out = run_sweep(&cfg).unwrap();
    assert_eq!(out.runs.len(), 25);
    assert_eq!(out.aggregates.len(), 5);
    assert_eq!(runs_csv(&out).lines().count(), 26);
    assert_eq!(aggregates_csv(&out).lines().count(), 6);
    assert!(out.aggregates.iter().all(|a| a.runs_ok == 5 && a.row_negentropy.unwrap().se.is_some()));
}

#[test]
fn seeding_schemes() {
    assert_eq!(replicate_seed(0, 0, 3, Seeding::Paired), replicate_seed(0, 4, 3, Seeding::Paired));
    assert_ne!(replicate_seed(0, 0, 3, Seeding::Independent), replicate_seed(0, 4, 3, Seeding::Independent));
    assert_ne!(replicate_seed(0, 0, 1, Seeding::Paired), replicate_seed(0, 0, 2, Seeding::Paired));
    assert_ne!(replicate_seed(1, 0, 1, Seeding::Paired), replicate_seed(0, 0, 1, Seeding::Paired));
}
