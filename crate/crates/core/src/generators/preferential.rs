//! Transition matrices grown by (non-linear) preferential attachment.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::tpm::Tpm;

/// How grown edges become state transitions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Orientation {
    /// Every edge can be traversed both ways.
    #[default]
    Undirected,
    /// Each new node points at the nodes it attached to; states without
    /// outgoing edges get a self-loop.
    NewToOld,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GrowthConfig {
    pub n_nodes: usize,
    /// Edges added with each new node.
    pub m: usize,
    /// Attachment probability is proportional to `degree^alpha`.
    pub alpha: f64,
    pub seed: u64,
    pub orientation: Orientation,
}

impl GrowthConfig {
    pub fn new(n_nodes: usize, m: usize, alpha: f64, seed: u64) -> Self {
        Self {
            n_nodes,
            m,
            alpha,
            seed,
            orientation: Orientation::Undirected,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.n_nodes < 2 {
            return Err(Error::InvalidConfig("n_nodes must be at least 2".into()));
        }
        if self.m < 1 || self.m >= self.n_nodes {
            return Err(Error::InvalidConfig(format!(
                "m must satisfy 1 <= m < n_nodes, got m = {}",
                self.m
            )));
        }
        if !(self.alpha >= 0.0 && self.alpha.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "alpha must be finite and non-negative, got {}",
                self.alpha
            )));
        }
        Ok(())
    }
}

/// A grown network: edges stored as `(newer, older)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Network {
    pub n: usize,
    pub edges: Vec<(usize, usize)>,
}

impl Network {
    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.n];
        for &(a, b) in &self.edges {
            deg[a] += 1;
            deg[b] += 1;
        }
        deg
    }

    fn neighbours(&self, orientation: Orientation) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.n];
        for &(new, old) in &self.edges {
            out[new].push(old);
            // the seed pair is mutually linked under either orientation
            if orientation == Orientation::Undirected || (new == 1 && old == 0) {
                out[old].push(new);
            }
        }
        for adj in &mut out {
            adj.sort_unstable();
            adj.dedup();
        }
        out
    }
}

/// Grows a network from two linked nodes, attaching `m` distinct edges per new node.
pub fn grow_pa_network(cfg: &GrowthConfig) -> Result<Network> {
    cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut degree = vec![0usize; cfg.n_nodes];
    let mut edges = vec![(1, 0)];
    degree[0] = 1;
    degree[1] = 1;
    let mut weights = Vec::with_capacity(cfg.n_nodes);
    for v in 2..cfg.n_nodes {
        weights.clear();
        weights.extend(degree[..v].iter().map(|&d| (d as f64).powf(cfg.alpha)));
        let targets = cfg.m.min(v);
        let mut chosen = Vec::with_capacity(targets);
        for _ in 0..targets {
            let total: f64 = weights.iter().sum();
            let mut x = rng.gen::<f64>() * total;
            let mut pick = None;
            for (u, &w) in weights.iter().enumerate() {
                if w > 0.0 {
                    pick = Some(u);
                    if x < w {
                        break;
                    }
                    x -= w;
                }
            }
            let u = pick.expect("some existing node has positive weight");
            weights[u] = 0.0;
            chosen.push(u);
        }
        chosen.sort_unstable();
        for u in chosen {
            edges.push((v, u));
            degree[u] += 1;
            degree[v] += 1;
        }
    }
    Ok(Network {
        n: cfg.n_nodes,
        edges,
    })
}

/// Grows a network and row-normalizes its adjacency into a transition matrix.
///
/// Each state moves to one of its neighbours uniformly at random.
pub fn grow_pa_tpm<T: Scalar>(cfg: &GrowthConfig) -> Result<Tpm<T>> {
    let net = grow_pa_network(cfg)?;
    let adj = net.neighbours(cfg.orientation);
    let n = net.n;
    let mut data = vec![T::zero(); n * n];
    for (c, out) in adj.iter().enumerate() {
        if out.is_empty() {
            data[c * n + c] = T::one();
            continue;
        }
        let p = T::one() / T::from_usize_lossy(out.len());
        for &e in out {
            data[c * n + e] = p;
        }
    }
    Tpm::from_flat(n, data)
}
