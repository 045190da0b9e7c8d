//! Complexity of an emergent hierarchy.
//!
//! Two spreads are measured. Along each bottom-to-top path the ΔCP values are
//! normalized into a distribution whose entropy says how evenly causation is
//! shared between levels. Within each level the members' ΔCP values are
//! normalized again; low entropy there means the scales of that level are
//! strongly differentiated. The complexity score is the mean path entropy
//! times the row negentropy.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::apportion::EmergentHierarchy;
use crate::error::{Error, Result};
use crate::lattice::PathCounter;
use crate::scalar::{entropy_bits, Scalar};

/// Paths sampled per hierarchy unless configured otherwise.
pub const DEFAULT_PATH_SAMPLES: usize = 100;

/// ΔCP along one micro-to-macro path and its normalization.
#[derive(Debug, Clone, PartialEq)]
pub struct PathDistribution<T> {
    pub levels: Vec<usize>,
    pub raw: Vec<T>,
    /// `None` when the path carries no positive total ΔCP.
    pub p: Option<Vec<T>>,
}

impl<T: Scalar> PathDistribution<T> {
    pub fn new(levels: Vec<usize>, raw: Vec<T>) -> Self {
        let total: T = raw.iter().copied().sum();
        let p = (total > T::zero()).then(|| raw.iter().map(|&d| d / total).collect());
        Self { levels, raw, p }
    }

    pub fn is_defined(&self) -> bool {
        self.p.is_some()
    }
}

/// Shannon entropy in bits of the normalized path distribution.
pub fn path_entropy<T: Scalar>(d: &PathDistribution<T>) -> Result<T> {
    d.p.as_ref()
        .map(|p| entropy_bits(p.iter().copied()))
        .ok_or(Error::UndefinedDistribution)
}

/// How per-path entropies are combined.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PathAggregate {
    #[default]
    Mean,
    /// Sum over all paths; estimated as `mean * path count` when sampling.
    Sum,
}

/// Treatment of paths whose ΔCP total is not positive.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ZeroPaths {
    /// Count them with entropy 0.
    #[default]
    CountAsZero,
    Skip,
}

/// When paths are drawn at random instead of enumerated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Sampling {
    /// Enumerate whenever the path count fits in `sample_size`.
    #[default]
    Auto,
    Always,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MetricsConfig {
    pub sample_size: usize,
    pub seed: u64,
    pub aggregate: PathAggregate,
    pub zero_paths: ZeroPaths,
    pub sampling: Sampling,
}

impl Default for MetricsConfig {
    fn default() -> Self {
        Self {
            sample_size: DEFAULT_PATH_SAMPLES,
            seed: 0,
            aggregate: PathAggregate::Mean,
            zero_paths: ZeroPaths::CountAsZero,
            sampling: Sampling::Auto,
        }
    }
}

/// Path entropy summary of a hierarchy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathEntropy<T> {
    pub value: T,
    /// Paths that entered the average.
    pub paths_used: usize,
    /// All maximal paths in the hierarchy (saturating).
    pub total_paths: u128,
    pub exhaustive: bool,
}

/// Distributions of the given paths (node ids of the hierarchy diagram).
pub fn path_distributions<T: Scalar>(
    h: &EmergentHierarchy<T>,
    paths: &[Vec<usize>],
) -> Vec<PathDistribution<T>> {
    let diagram = h.diagram();
    paths
        .iter()
        .map(|path| {
            let levels = path.iter().map(|&v| diagram.node(v).num_blocks()).collect();
            let raw = path
                .iter()
                .map(|&v| h.delta_of(diagram.node(v)).expect("hierarchy nodes carry ΔCP"))
                .collect();
            PathDistribution::new(levels, raw)
        })
        .collect()
}

/// Average entropy of ΔCP over the maximal paths from the anchor.
///
/// Under [`Sampling::Auto`], when there are at most `cfg.sample_size` paths
/// all of them are used; otherwise `cfg.sample_size` paths are drawn
/// uniformly, each from its own seeded stream.
pub fn s_path<T: Scalar>(h: &EmergentHierarchy<T>, cfg: &MetricsConfig) -> Result<PathEntropy<T>> {
    let counter = PathCounter::to_maximal(h.diagram(), h.anchor())?;
    let total = counter.count();
    if total == 0 {
        return Err(Error::NoPath {
            bottom: h.anchor().to_string(),
            top: "any maximal scale".into(),
        });
    }
    let exhaustive = cfg.sampling == Sampling::Auto && total <= cfg.sample_size as u128;
    let paths: Vec<Vec<usize>> = if exhaustive {
        counter.enumerate(cfg.sample_size)
    } else {
        (0..cfg.sample_size as u64)
            .into_par_iter()
            .map(|i| {
                let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
                rng.set_stream(i);
                counter.sample(&mut rng)
            })
            .collect()
    };
    let mut sum = T::zero();
    let mut used = 0usize;
    for d in path_distributions(h, &paths) {
        match path_entropy(&d) {
            Ok(e) => {
                sum += e;
                used += 1;
            }
            Err(_) if cfg.zero_paths == ZeroPaths::CountAsZero => used += 1,
            Err(_) => {}
        }
    }
    let mean = if used == 0 {
        T::zero()
    } else {
        sum / T::from_usize_lossy(used)
    };
    let value = match cfg.aggregate {
        PathAggregate::Mean => mean,
        PathAggregate::Sum if exhaustive => sum,
        PathAggregate::Sum => mean * T::from_f64_lossy(total as f64),
    };
    Ok(PathEntropy {
        value,
        paths_used: used,
        total_paths: total,
        exhaustive,
    })
}

/// Mean within-level entropy `S_row` over all `L` levels and the negentropy `log2 L - S_row`.
pub fn row_negentropy<T: Scalar>(h: &EmergentHierarchy<T>) -> (T, T) {
    let l = h.micro_dim();
    let total: T = h
        .per_level()
        .values()
        .map(|row| {
            let mass: T = row.iter().map(|&(_, d)| d).sum();
            entropy_bits(row.iter().map(|&(_, d)| d / mass))
        })
        .fold(T::zero(), |acc, s| acc + s);
    let s_row = total / T::from_usize_lossy(l);
    let neg = T::from_usize_lossy(l).log2() - s_row;
    (s_row, neg.max(T::zero()))
}

#[derive(Debug, Clone, PartialEq)]
pub struct MetricsReport<T> {
    pub s_path: T,
    pub n_paths_used: usize,
    pub total_paths: u128,
    pub s_row: T,
    pub row_negentropy: T,
    pub complexity: T,
    pub micro_dim: usize,
    /// Contributing scales, anchor included when its ΔCP clears the threshold.
    pub n_emergent_nodes: usize,
    pub level_means: Vec<T>,
    pub level_centroid: Option<T>,
}

/// Path entropy, row negentropy and their product.
pub fn complexity<T: Scalar>(h: &EmergentHierarchy<T>, cfg: &MetricsConfig) -> Result<MetricsReport<T>> {
    let path = s_path(h, cfg)?;
    let (s_row, neg) = row_negentropy(h);
    Ok(MetricsReport {
        s_path: path.value,
        n_paths_used: path.paths_used,
        total_paths: path.total_paths,
        s_row,
        row_negentropy: neg,
        complexity: path.value * neg,
        micro_dim: h.micro_dim(),
        n_emergent_nodes: h.contributor_count(),
        level_means: h.level_means(),
        level_centroid: h.level_centroid(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn path_entropy_examples() {
        let one = PathDistribution::new(vec![3, 2, 1], vec![0.0f64, 0.7, 0.0]);
        assert_eq!(path_entropy(&one).unwrap(), 0.0);
        let uniform = PathDistribution::new((1..=8).rev().collect(), vec![0.1f64; 8]);
        assert!((path_entropy(&uniform).unwrap() - 3.0).abs() < 1e-12);
        let half = PathDistribution::new(vec![4, 3, 2, 1], vec![0.5f64, 0.5, 0.0, 0.0]);
        assert!((path_entropy(&half).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn undefined_distribution() {
        let d = PathDistribution::new(vec![2, 1], vec![0.0f64, 0.0]);
        assert!(!d.is_defined());
        assert_eq!(path_entropy(&d), Err(Error::UndefinedDistribution));
    }
}
