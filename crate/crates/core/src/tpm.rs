//! Transition probability matrices and their coarse-grainings.

use crate::error::{Error, Result};
use crate::lattice::Partition;
use crate::scalar::Scalar;

/// A row-stochastic transition matrix at one scale of description.
///
/// Row `c` is the effect distribution `p(e | do(c))`. Each state carries a
/// block weight: the number of microstates it aggregates. Coarse-graining
/// averages rows with these weights, which is what makes repeated merges agree
/// with a single coarse-graining from the microscale.
#[derive(Debug, Clone, PartialEq)]
pub struct Tpm<T> {
    n: usize,
    data: Vec<T>,
    weights: Vec<usize>,
    labels: Option<Vec<String>>,
}

impl<T: Scalar> Tpm<T> {
    /// Validates a square row-stochastic matrix and wraps it with unit block weights.
    ///
    /// Rows whose sum is within the scalar's row tolerance of one are
    /// renormalized, unless the deviation is plain summation rounding (at most
    /// `n` ulps), in which case the entries are kept bit for bit. Anything
    /// further off is rejected.
    pub fn from_rows(rows: &[Vec<T>]) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::Empty);
        }
        let mut data = Vec::with_capacity(n * n);
        for (r, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::NonSquare {
                    rows: n,
                    row: r,
                    cols: row.len(),
                });
            }
            data.extend_from_slice(row);
        }
        Self::from_flat(n, data)
    }

    /// Same as [`Tpm::from_rows`] for a row-major buffer of length `n * n`.
    pub fn from_flat(n: usize, mut data: Vec<T>) -> Result<Self> {
        if n == 0 {
            return Err(Error::Empty);
        }
        if data.len() != n * n {
            return Err(Error::NonSquare {
                rows: n,
                row: data.len() / n,
                cols: data.len() % n,
            });
        }
        for r in 0..n {
            let row = &mut data[r * n..(r + 1) * n];
            for (c, &v) in row.iter().enumerate() {
                if !v.is_finite() || v < T::zero() {
                    return Err(Error::NegativeEntry {
                        row: r,
                        col: c,
                        value: v.to_f64().unwrap_or(f64::NAN),
                    });
                }
            }
            let sum: T = row.iter().copied().sum();
            let deviation = sum - T::one();
            if deviation.abs() > T::row_sum_tolerance() {
                return Err(Error::RowSumViolation {
                    row: r,
                    deviation: deviation.to_f64().unwrap_or(f64::NAN),
                });
            }
            let rounding = T::epsilon() * T::from_usize_lossy(n);
            if deviation.abs() > rounding {
                for v in row.iter_mut() {
                    *v /= sum;
                }
            }
        }
        Ok(Self {
            n,
            data,
            weights: vec![1; n],
            labels: None,
        })
    }

    /// Builds a matrix from a closure `f(cause, effect)`.
    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> T) -> Result<Self> {
        let data = (0..n * n).map(|k| f(k / n, k % n)).collect();
        Self::from_flat(n, data)
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, |c, e| if c == e { T::one() } else { T::zero() })
            .expect("identity is stochastic")
    }

    /// All rows uniform.
    pub fn uniform(n: usize) -> Self {
        let p = T::one() / T::from_usize_lossy(n);
        Self::from_fn(n, |_, _| p).expect("uniform rows are stochastic")
    }

    /// Deterministic map `c -> targets[c]`.
    pub fn deterministic(targets: &[usize]) -> Result<Self> {
        let n = targets.len();
        if let Some(&t) = targets.iter().find(|&&t| t >= n) {
            return Err(Error::IndexOutOfRange { index: t, n });
        }
        Self::from_fn(n, |c, e| if targets[c] == e { T::one() } else { T::zero() })
    }

    /// Replaces the block weights, e.g. when loading an already coarse-grained matrix.
    pub fn with_block_weights(mut self, weights: Vec<usize>) -> Result<Self> {
        if weights.len() != self.n {
            return Err(Error::InvalidWeights(format!(
                "{} weights for {} states",
                weights.len(),
                self.n
            )));
        }
        if weights.iter().any(|&w| w == 0) {
            return Err(Error::InvalidWeights("weights must be at least one".into()));
        }
        self.weights = weights;
        Ok(self)
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.n {
            return Err(Error::InvalidConfig(format!(
                "{} labels for {} states",
                labels.len(),
                self.n
            )));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    /// Number of states at this scale.
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, cause: usize, effect: usize) -> T {
        self.data[cause * self.n + effect]
    }

    #[inline]
    pub fn row(&self, cause: usize) -> &[T] {
        &self.data[cause * self.n..(cause + 1) * self.n]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[T]> {
        self.data.chunks_exact(self.n)
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        self.rows().map(<[T]>::to_vec).collect()
    }

    pub fn as_slice(&self) -> &[T] {
        &self.data
    }

    pub fn block_weights(&self) -> &[usize] {
        &self.weights
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// Number of microstates underlying this scale.
    pub fn micro_size(&self) -> usize {
        self.weights.iter().sum()
    }

    pub fn is_microscale(&self) -> bool {
        self.weights.iter().all(|&w| w == 1)
    }

    /// Macroscale matrix over the blocks of `p`.
    ///
    /// Entry `(A, B)` is the weight-averaged probability, over the causes in
    /// `A`, of landing anywhere in `B`. The identity partition reproduces the
    /// input exactly and the one-block partition gives `[[1]]`.
    pub fn coarse_grain(&self, p: &Partition) -> Result<Self> {
        if p.len() != self.n {
            return Err(Error::InvalidPartition(format!(
                "partition over {} elements for a {}-state matrix",
                p.len(),
                self.n
            )));
        }
        let k = p.num_blocks();
        let mut block_weight = vec![0usize; k];
        for (i, &w) in self.weights.iter().enumerate() {
            block_weight[p.block_of(i)] += w;
        }
        let mut data = vec![T::zero(); k * k];
        if k == 1 {
            data[0] = T::one();
        } else {
            let mut lumped = vec![T::zero(); k];
            for i in 0..self.n {
                lumped.iter_mut().for_each(|x| *x = T::zero());
                for (j, &v) in self.row(i).iter().enumerate() {
                    lumped[p.block_of(j)] += v;
                }
                let a = p.block_of(i);
                let share = T::from_usize_lossy(self.weights[i]) / T::from_usize_lossy(block_weight[a]);
                for (b, &v) in lumped.iter().enumerate() {
                    data[a * k + b] += share * v;
                }
            }
        }
        let labels = self.labels.as_ref().map(|names| {
            p.blocks()
                .iter()
                .map(|blk| blk.iter().map(|&i| names[i].as_str()).collect::<Vec<_>>().join("+"))
                .collect()
        });
        Ok(Self {
            n: k,
            data,
            weights: block_weight,
            labels,
        })
    }

    /// Merges states `i` and `j` into one, keeping every other state.
    ///
    /// The merged state sits at position `min(i, j)` and the states after
    /// `max(i, j)` shift down by one, matching the canonical block order of the
    /// corresponding partition.
    pub fn merge_blocks(&self, i: usize, j: usize) -> Result<Self> {
        for idx in [i, j] {
            if idx >= self.n {
                return Err(Error::IndexOutOfRange { index: idx, n: self.n });
            }
        }
        if i == j {
            return Err(Error::InvalidPartition("cannot merge a state with itself".into()));
        }
        let p = Partition::finest(self.n).merge(i, j)?;
        self.coarse_grain(&p)
    }

    /// Relabels states so that old state `i` becomes state `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        let n = self.n;
        let mut seen = vec![false; n];
        if perm.len() != n {
            return Err(Error::SizeMismatch { left: n, right: perm.len() });
        }
        for &p in perm {
            if p >= n || std::mem::replace(&mut seen[p], true) {
                return Err(Error::InvalidConfig("not a permutation".into()));
            }
        }
        let mut data = vec![T::zero(); n * n];
        let mut weights = vec![0; n];
        for c in 0..n {
            weights[perm[c]] = self.weights[c];
            for e in 0..n {
                data[perm[c] * n + perm[e]] = self.get(c, e);
            }
        }
        let labels = self.labels.as_ref().map(|names| {
            let mut out = vec![String::new(); n];
            for (i, name) in names.iter().enumerate() {
                out[perm[i]] = name.clone();
            }
            out
        });
        Ok(Self { n, data, weights, labels })
    }

    /// Largest absolute entrywise difference; `None` when shapes differ.
    pub fn max_abs_diff(&self, other: &Self) -> Option<T> {
        (self.n == other.n).then(|| {
            self.data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| (a - b).abs())
                .fold(T::zero(), T::max)
        })
    }
}
