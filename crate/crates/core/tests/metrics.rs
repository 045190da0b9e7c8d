mod common;

use common::*;
use emergence_core::apportion::DeltaCpMap;
use emergence_core::lattice::PathCounter;
use emergence_core::metrics::{path_distributions, path_entropy, row_negentropy, s_path, Sampling};
use emergence_core::{analyze, complexity, emergent_set, AnalysisConfig, EmergentHierarchy, MetricsConfig, Partition, Tpm};
use proptest::prelude::*;

fn hierarchy(n: usize, entries: &[(&str, f64)]) -> EmergentHierarchy<f64> {
    let mut d = DeltaCpMap::<f64>::new();
    d.insert(Partition::finest(n), 0.0);
    for &(p, v) in entries {
        d.insert(p.parse().unwrap(), v);
    }
    emergent_set(&d, &AnalysisConfig::default()).unwrap()
}

fn scaled(h: &EmergentHierarchy<f64>, c: f64) -> EmergentHierarchy<f64> {
    let d: DeltaCpMap<f64> = h.delta().iter().map(|(p, v)| (p.clone(), v * c)).collect();
    emergent_set(&d, &AnalysisConfig::default()).unwrap()
}

#[test]
fn single_chain_with_even_gains() {
    let mut d = DeltaCpMap::<f64>::new();
    for p in ["(0)(1)(2)(3)", "(0 1)(2)(3)", "(0 1 2)(3)", "(0 1 2 3)"] {
        d.insert(p.parse().unwrap(), 0.25);
    }
    let h = emergent_set(&d, &AnalysisConfig::default()).unwrap();
    let s = s_path(&h, &MetricsConfig::default()).unwrap();
    assert_eq!(s.total_paths, 1);
    assert!((s.value - 2.0).abs() < 1e-12);
}

#[test]
fn singleton_rows_give_full_negentropy() {
    let h = hierarchy(4, &[("(0 1)(2)(3)", 0.2), ("(0 1 2)(3)", 0.1)]);
    let (s_row, neg) = row_negentropy(&h);
    assert_eq!(s_row, 0.0);
    assert!((neg - 2.0).abs() < 1e-12);
}

#[test]
fn one_row_of_four_equal_members() {
    let h = hierarchy(
        8,
        &[
            ("(0 1)(2)(3)(4)(5)(6)(7)", 0.1),
            ("(0)(1)(2 3)(4)(5)(6)(7)", 0.1),
            ("(0)(1)(2)(3)(4 5)(6)(7)", 0.1),
            ("(0)(1)(2)(3)(4)(5)(6 7)", 0.1),
            ("(0 1 2 3)(4 5 6 7)", 0.3),
        ],
    );
    let (s_row, neg) = row_negentropy(&h);
    assert!((s_row - 0.25).abs() < 1e-12);
    assert!((neg - 2.75).abs() < 1e-12);
}

#[test]
fn balloon_has_no_path_spread() {
    // all causation sits on one macroscale with a vanishing micro contribution
    let mut d = DeltaCpMap::<f64>::new();
    d.insert(Partition::finest(6), 1e-6);
    d.insert("(0 1 2)(3 4 5)".parse().unwrap(), 0.9);
    let h = emergent_set(&d, &AnalysisConfig::default()).unwrap();
    let r = complexity(&h, &MetricsConfig::default()).unwrap();
    assert!(r.s_path < 1e-4);
    assert!(r.complexity < 1e-3);
}

#[test]
fn uniform_chain_scores_zero() {
    let a = analyze(&Tpm::<f64>::uniform(5), &AnalysisConfig::default()).unwrap();
    let r = complexity(&a.hierarchy, &MetricsConfig::default()).unwrap();
    assert_eq!(r.s_path, 0.0);
    assert_eq!(r.complexity, 0.0);
    assert_eq!(r.n_emergent_nodes, 0);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn entropies_respect_their_bounds(t in tpm_strategy(2..=6)) {
        let h = analyze(&t, &AnalysisConfig::default()).unwrap().hierarchy;
        let counter = PathCounter::to_maximal(h.diagram(), h.anchor()).unwrap();
        let paths = counter.enumerate(5000);
        for d in path_distributions(&h, &paths) {
            if let Ok(e) = path_entropy(&d) {
                prop_assert!(e >= 0.0);
                prop_assert!(e <= (d.raw.len() as f64).log2() + 1e-12);
            }
        }
        let r = complexity(&h, &MetricsConfig::default()).unwrap();
        let l = t.n() as f64;
        prop_assert!(r.s_path >= 0.0);
        prop_assert!(r.row_negentropy >= 0.0 && r.row_negentropy <= l.log2() + 1e-12);
        prop_assert!(r.complexity >= 0.0);
        let widest = h.per_level().values().map(Vec::len).max().unwrap_or(1) as f64;
        prop_assert!(r.s_row <= widest.log2() + 1e-12);
    }

    #[test]
    fn scaling_all_gains_changes_nothing(t in tpm_strategy(2..=6), c in 1.0f64..50.0) {
        let h = analyze(&t, &AnalysisConfig::default()).unwrap().hierarchy;
        let s = scaled(&h, c);
        prop_assume!(s.delta().len() == h.delta().len());
        let cfg = MetricsConfig { sample_size: 20, ..MetricsConfig::default() };
        let a = complexity(&h, &cfg).unwrap();
        let b = complexity(&s, &cfg).unwrap();
        prop_assert!((a.s_path - b.s_path).abs() < 1e-10);
        prop_assert!((a.s_row - b.s_row).abs() < 1e-10);
        prop_assert!((a.row_negentropy - b.row_negentropy).abs() < 1e-10);
        prop_assert!((a.complexity - b.complexity).abs() < 1e-10);
    }

    #[test]
    fn metrics_ignore_state_names(
        (t, perm) in tpm_strategy(2..=6).prop_flat_map(|t| { let n = t.n(); (Just(t), permutation_strategy(n)) })
    ) {
        let cfg = MetricsConfig { sample_size: 100_000, ..MetricsConfig::default() };
        let a = complexity(&analyze(&t, &AnalysisConfig::default()).unwrap().hierarchy, &cfg).unwrap();
        let b = complexity(&analyze(&t.permuted(&perm).unwrap(), &AnalysisConfig::default()).unwrap().hierarchy, &cfg).unwrap();
        prop_assert!((a.s_path - b.s_path).abs() < 1e-10);
        prop_assert!((a.row_negentropy - b.row_negentropy).abs() < 1e-10);
        prop_assert_eq!(a.total_paths, b.total_paths);
    }
}

/// Random functional graph blended with a little uniform noise; these carry many emergent scales.
fn near_deterministic(n: usize, seed: u64) -> Tpm<f64> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let targets: Vec<usize> = (0..n).map(|_| rng.gen_range(0..n)).collect();
    let noise = rng.gen_range(0.0..0.2);
    Tpm::from_fn(n, |c, e| {
        let hit = if targets[c] == e { 1.0 - noise } else { 0.0 };
        hit + noise / n as f64
    })
    .unwrap()
}

#[test]
fn sampled_and_exhaustive_path_entropy_agree() {
    let mut checked = 0;
    for seed in 0..400u64 {
        let t = near_deterministic(5 + (seed as usize % 3), seed);
        let h = analyze(&t, &AnalysisConfig::default()).unwrap().hierarchy;
        let exact = s_path(&h, &MetricsConfig { sample_size: 1000, ..MetricsConfig::default() }).unwrap();
        if exact.total_paths < 10 || !exact.exhaustive {
            continue;
        }
        let sampled = s_path(
            &h,
            &MetricsConfig {
                sample_size: 1000,
                seed,
                sampling: Sampling::Always,
                ..MetricsConfig::default()
            },
        )
        .unwrap();
        assert!(!sampled.exhaustive);
        assert!((exact.value - sampled.value).abs() <= 0.05, "seed {seed}: {} vs {}", exact.value, sampled.value);
        checked += 1;
    }
    assert!(checked >= 20, "only {checked} hierarchies with enough paths");
}
