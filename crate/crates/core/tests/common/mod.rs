#![allow(dead_code)]

use emergence_core::{Partition, Tpm};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Random row-stochastic matrix; roughly a third of the entries are exact zeros.
pub fn random_tpm(n: usize, seed: u64) -> Tpm<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rows: Vec<Vec<f64>> = (0..n)
        .map(|_| {
            let mut r: Vec<f64> = (0..n)
                .map(|_| if rng.gen_bool(0.35) { 0.0 } else { rng.gen::<f64>() })
                .collect();
            if r.iter().all(|&x| x == 0.0) {
                r[rng.gen_range(0..n)] = 1.0;
            }
            let s: f64 = r.iter().sum();
            r.iter().map(|x| x / s).collect()
        })
        .collect();
    Tpm::from_rows(&rows).unwrap()
}

pub fn tpm_strategy(sizes: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = Tpm<f64>> {
    (sizes, any::<u64>()).prop_map(|(n, seed)| random_tpm(n, seed))
}

pub fn partition_strategy(n: usize) -> impl Strategy<Value = Partition> {
    proptest::collection::vec(0..n, n).prop_map(|l| Partition::from_labels(&l).unwrap())
}

pub fn tpm_and_partition(sizes: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = (Tpm<f64>, Partition)> {
    tpm_strategy(sizes).prop_flat_map(|t| {
        let n = t.n();
        (Just(t), partition_strategy(n))
    })
}

pub fn permutation_strategy(n: usize) -> impl Strategy<Value = Vec<usize>> {
    Just((0..n).collect::<Vec<_>>()).prop_shuffle()
}

/// Mutual information of cause and effect under a uniform cause prior, from
/// the joint distribution without going through the entropies of the library.
pub fn mutual_information(t: &Tpm<f64>) -> f64 {
    let n = t.n();
    let pc = 1.0 / n as f64;
    let pe: Vec<f64> = (0..n).map(|e| (0..n).map(|c| pc * t.get(c, e)).sum()).collect();
    let mut mi = 0.0;
    for c in 0..n {
        for e in 0..n {
            let joint = pc * t.get(c, e);
            if joint > 0.0 {
                mi += joint * (joint / (pc * pe[e])).log2();
            }
        }
    }
    mi
}

/// Coarse-graining straight from the block definition with uniform micro weights.
pub fn naive_coarse_grain(t: &Tpm<f64>, p: &Partition) -> Vec<Vec<f64>> {
    let blocks = p.blocks();
    blocks
        .iter()
        .map(|a| {
            blocks
                .iter()
                .map(|b| {
                    let s: f64 = a.iter().map(|&i| b.iter().map(|&j| t.get(i, j)).sum::<f64>()).sum();
                    s / a.len() as f64
                })
                .collect()
        })
        .collect()
}

/// Partition of the block indices of `fine` induced by a coarser partition.
pub fn induced(fine: &Partition, coarse: &Partition) -> Partition {
    let labels: Vec<u16> = fine.blocks().iter().map(|b| coarse.labels()[b[0]]).collect();
    Partition::from_labels(&labels).unwrap()
}
