//! Branching greedy search for the emergent hierarchy of systems too large to
//! enumerate.
//!
//! From the microscale the search repeatedly merges the pair of blocks whose
//! coarse-graining has the highest CP. At every level of the main descent the
//! best few merges each seed a full greedy completion down to one block; every
//! partition touched this way is scored exactly, and ΔCP is then apportioned
//! over the diagram of sampled partitions.

use std::collections::HashMap;
use std::sync::Mutex;

use rayon::prelude::*;

use crate::apportion::{delta_cp, emergent_set, CpMap, DeltaCpMap, EmergentHierarchy};
use crate::causal::{cp, AnalysisConfig};
use crate::error::{Error, Result};
use crate::lattice::{build_hasse, HasseDiagram, Partition};
use crate::scalar::{entropy_bits, xlog2x, Scalar};
use crate::tpm::Tpm;

/// Default number of branches spawned per level.
pub const DEFAULT_N_PATHS: usize = 3;

/// Candidates whose scores differ by less than this are treated as tied.
const TIE_TOLERANCE: f64 = 1e-12;

// below this many blocks candidate scoring stays on the calling thread
const PARALLEL_MIN_BLOCKS: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum TieBreak {
    /// The merge with the lexicographically smallest restricted growth string wins.
    #[default]
    Canonical,
    /// Ties go to the smallest seeded hash of the merged partition.
    SeededRandom,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GreedyConfig {
    n_paths: usize,
    pub seed: u64,
    pub tie_break: TieBreak,
}

impl GreedyConfig {
    pub fn new(n_paths: usize, seed: u64, tie_break: TieBreak) -> Result<Self> {
        if n_paths == 0 {
            return Err(Error::InvalidConfig("n_paths must be at least 1".into()));
        }
        Ok(Self {
            n_paths,
            seed,
            tie_break,
        })
    }

    pub fn n_paths(&self) -> usize {
        self.n_paths
    }
}

impl Default for GreedyConfig {
    fn default() -> Self {
        Self {
            n_paths: DEFAULT_N_PATHS,
            seed: 0,
            tie_break: TieBreak::Canonical,
        }
    }
}

/// Output of [`branching_greedy`].
#[derive(Debug, Clone)]
pub struct GreedyResult<T> {
    pub sampled_cp: CpMap<T>,
    pub diagram: HasseDiagram,
    pub delta: DeltaCpMap<T>,
    /// The main descent from the finest partition, then each completion in spawn order.
    pub paths: Vec<Vec<Partition>>,
}

impl<T: Scalar> GreedyResult<T> {
    /// Emergent hierarchy over the sampled partitions.
    pub fn hierarchy(&self, cfg: &AnalysisConfig) -> Result<EmergentHierarchy<T>> {
        emergent_set(&self.delta, cfg)
    }
}

/// CP of every single merge of a macroscale matrix, in `O(k)` per pair.
///
/// Only the merged row, the two merged columns and the effect marginal change
/// when two states are merged, so each candidate is scored from cached row
/// entropies and column sums instead of a fresh coarse-graining.
pub struct MergeScorer<'a, T> {
    tpm: &'a Tpm<T>,
    row_entropy: Vec<T>,
    total_entropy: T,
    column_sums: Vec<T>,
}

impl<'a, T: Scalar> MergeScorer<'a, T> {
    pub fn new(tpm: &'a Tpm<T>) -> Self {
        let k = tpm.n();
        let row_entropy: Vec<T> = tpm.rows().map(|r| entropy_bits(r.iter().copied())).collect();
        let total_entropy = row_entropy.iter().copied().sum();
        let mut column_sums = vec![T::zero(); k];
        for row in tpm.rows() {
            for (s, &v) in column_sums.iter_mut().zip(row) {
                *s += v;
            }
        }
        Self {
            tpm,
            row_entropy,
            total_entropy,
            column_sums,
        }
    }

    /// CP after merging states `i < j`.
    pub fn score(&self, i: usize, j: usize) -> T {
        debug_assert!(i < j && j < self.tpm.n());
        let t = self.tpm;
        let k = t.n();
        if k <= 2 {
            return T::zero();
        }
        let w = t.block_weights();
        let wi = T::from_usize_lossy(w[i]);
        let wj = T::from_usize_lossy(w[j]);
        let a = wi / (wi + wj);
        let b = wj / (wi + wj);
        let (ri, rj) = (t.row(i), t.row(j));

        let mut cond = self.total_entropy - self.row_entropy[i] - self.row_entropy[j];
        for r in 0..k {
            if r == i || r == j {
                continue;
            }
            let (x, y) = (t.get(r, i), t.get(r, j));
            cond += xlog2x(x) + xlog2x(y) - xlog2x(x + y);
        }

        let merged_col = a * (ri[i] + ri[j]) + b * (rj[i] + rj[j]);
        let mut merged_entropy = -xlog2x(merged_col);
        let mut effect_entropy = T::zero();
        let kk = T::from_usize_lossy(k - 1);
        for e in 0..k {
            if e == i || e == j {
                continue;
            }
            let m = a * ri[e] + b * rj[e];
            merged_entropy -= xlog2x(m);
            let col = self.column_sums[e] - ri[e] - rj[e] + m;
            effect_entropy -= xlog2x(col / kk);
        }
        let col = self.column_sums[i] + self.column_sums[j] - (ri[i] + ri[j] + rj[i] + rj[j]) + merged_col;
        effect_entropy -= xlog2x(col / kk);
        cond = (cond + merged_entropy.max(T::zero())) / kk;

        let v = (effect_entropy - cond) / kk.log2();
        v.max(T::zero()).min(T::one())
    }
}

#[derive(Clone)]
struct Candidate<T> {
    score: T,
    partition: Partition,
}

struct Search<'a, T> {
    micro: &'a Tpm<T>,
    cfg: GreedyConfig,
    tol: T,
    successors: Mutex<HashMap<Partition, Partition>>,
    cps: Mutex<HashMap<Partition, T>>,
}

impl<'a, T: Scalar> Search<'a, T> {
    fn new(micro: &'a Tpm<T>, cfg: GreedyConfig) -> Result<Self> {
        if !micro.is_microscale() {
            return Err(Error::InvalidConfig(
                "greedy search expects a microscale matrix with unit block weights".into(),
            ));
        }
        Ok(Self {
            micro,
            cfg,
            tol: T::from_f64_lossy(TIE_TOLERANCE),
            successors: Mutex::new(HashMap::new()),
            cps: Mutex::new(HashMap::new()),
        })
    }

    fn tie_key(&self, p: &Partition) -> u64 {
        match self.cfg.tie_break {
            TieBreak::Canonical => 0,
            TieBreak::SeededRandom => {
                // splitmix64 over the labels
                let mut h = self.cfg.seed ^ 0x9e37_79b9_7f4a_7c15;
                for &l in p.labels() {
                    h = h.wrapping_add(u64::from(l) + 1).wrapping_mul(0x9e37_79b9_7f4a_7c15);
                    h ^= h >> 31;
                    h = h.wrapping_mul(0xbf58_476d_1ce4_e5b9);
                    h ^= h >> 27;
                }
                h
            }
        }
    }

    fn better(&self, a: &Candidate<T>, b: &Candidate<T>) -> bool {
        let d = a.score - b.score;
        if d > self.tol {
            return true;
        }
        if d < -self.tol {
            return false;
        }
        (self.tie_key(&a.partition), &a.partition) < (self.tie_key(&b.partition), &b.partition)
    }

    fn exact_cp(&self, p: &Partition) -> Result<T> {
        if let Some(&v) = self.cps.lock().expect("cp cache").get(p) {
            return Ok(v);
        }
        let v = cp(&self.micro.coarse_grain(p)?);
        self.cps.lock().expect("cp cache").insert(p.clone(), v);
        Ok(v)
    }

    /// Every single merge of `p`, scored; pairs in `(i, j)` order.
    fn candidates(&self, p: &Partition) -> Result<Vec<Candidate<T>>> {
        let macro_tpm = self.micro.coarse_grain(p)?;
        self.cps
            .lock()
            .expect("cp cache")
            .entry(p.clone())
            .or_insert_with(|| cp(&macro_tpm));
        let scorer = MergeScorer::new(&macro_tpm);
        let k = p.num_blocks();
        let pairs: Vec<(usize, usize)> = (0..k).flat_map(|i| (i + 1..k).map(move |j| (i, j))).collect();
        let eval = |&(i, j): &(usize, usize)| Candidate {
            score: scorer.score(i, j),
            partition: p.merge(i, j).expect("block ids in range"),
        };
        Ok(if k >= PARALLEL_MIN_BLOCKS {
            pairs.par_iter().map(eval).collect()
        } else {
            pairs.iter().map(eval).collect()
        })
    }

    fn top(&self, mut cands: Vec<Candidate<T>>, count: usize) -> Vec<Partition> {
        let mut out = Vec::with_capacity(count);
        while out.len() < count && !cands.is_empty() {
            let mut best = 0;
            for i in 1..cands.len() {
                if self.better(&cands[i], &cands[best]) {
                    best = i;
                }
            }
            out.push(cands.swap_remove(best).partition);
        }
        out
    }

    fn successor(&self, p: &Partition) -> Result<Option<Partition>> {
        if p.num_blocks() <= 1 {
            return Ok(None);
        }
        if let Some(s) = self.successors.lock().expect("successor cache").get(p) {
            return Ok(Some(s.clone()));
        }
        let best = self
            .top(self.candidates(p)?, 1)
            .pop()
            .expect("at least one merge exists");
        self.successors
            .lock()
            .expect("successor cache")
            .insert(p.clone(), best.clone());
        Ok(Some(best))
    }

    fn completion(&self, start: &Partition) -> Result<(Vec<Partition>, Vec<T>)> {
        let mut path = vec![start.clone()];
        let mut cps = vec![self.exact_cp(start)?];
        let mut cur = start.clone();
        while let Some(next) = self.successor(&cur)? {
            cps.push(self.exact_cp(&next)?);
            path.push(next.clone());
            cur = next;
        }
        Ok((path, cps))
    }
}

fn check_start<T: Scalar>(t: &Tpm<T>, start: &Partition) -> Result<()> {
    if start.len() != t.n() {
        return Err(Error::InvalidPartition(format!(
            "partition over {} elements for a {}-state matrix",
            start.len(),
            t.n()
        )));
    }
    Ok(())
}

/// Greedy descent from `start` to the single-block partition, with the exact CP of each step.
pub fn greedy_completion<T: Scalar>(t: &Tpm<T>, start: &Partition) -> Result<(Vec<Partition>, Vec<T>)> {
    check_start(t, start)?;
    Search::new(t, GreedyConfig::default())?.completion(start)
}

/// Like [`greedy_completion`] with an explicit tie-breaking rule.
pub fn greedy_completion_with<T: Scalar>(
    t: &Tpm<T>,
    start: &Partition,
    cfg: &GreedyConfig,
) -> Result<(Vec<Partition>, Vec<T>)> {
    check_start(t, start)?;
    Search::new(t, *cfg)?.completion(start)
}

/// Samples high-scoring coarsening paths and apportions ΔCP over them.
pub fn branching_greedy<T: Scalar>(t: &Tpm<T>, cfg: &GreedyConfig) -> Result<GreedyResult<T>> {
    let n = t.n();
    if n < 2 {
        return Err(Error::InvalidConfig("greedy search needs at least two states".into()));
    }
    let search = Search::new(t, *cfg)?;
    let finest = Partition::finest(n);
    let mut sampled_cp = CpMap::new();
    sampled_cp.insert(finest.clone(), cp(t));
    let mut main = vec![finest.clone()];
    let mut completions = Vec::new();
    let mut cur = finest;
    while cur.num_blocks() > 1 {
        let chosen = search.top(search.candidates(&cur)?, cfg.n_paths);
        let runs = chosen
            .par_iter()
            .map(|q| search.completion(q))
            .collect::<Result<Vec<_>>>()?;
        for (path, cps) in runs {
            for (p, v) in path.iter().zip(cps) {
                sampled_cp.insert_if_absent(p.clone(), v);
            }
            completions.push(path);
        }
        cur = chosen.into_iter().next().expect("at least one merge exists");
        main.push(cur.clone());
    }
    let diagram = build_hasse(sampled_cp.keys().cloned())?;
    let delta = delta_cp(&diagram, &sampled_cp)?;
    let mut paths = vec![main];
    paths.extend(completions);
    Ok(GreedyResult {
        sampled_cp,
        diagram,
        delta,
        paths,
    })
}
