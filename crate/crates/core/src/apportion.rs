//! Apportioning causal contributions across a lattice of scales.
//!
//! Every scale gets its CP; its ΔCP is the gain over the best strictly finer
//! scale in the diagram. Scales with ΔCP above the threshold form the
//! emergent hierarchy.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::causal::{cp, AnalysisConfig};
use crate::error::{Error, Result};
use crate::lattice::{build_hasse, enumerate_partitions_capped, HasseDiagram, Partition, DEFAULT_ENUMERATION_CAP};
use crate::scalar::Scalar;
use crate::tpm::Tpm;

/// Values attached to partitions, iterated in canonical partition order.
#[derive(Debug, Clone, PartialEq)]
pub struct PartitionMap<T> {
    values: BTreeMap<Partition, T>,
}

/// CP of each scale.
pub type CpMap<T> = PartitionMap<T>;
/// ΔCP of each scale; negative gains are kept.
pub type DeltaCpMap<T> = PartitionMap<T>;

impl<T: Copy> PartitionMap<T> {
    pub fn new() -> Self {
        Self {
            values: BTreeMap::new(),
        }
    }

    pub fn get(&self, p: &Partition) -> Option<T> {
        self.values.get(p).copied()
    }

    pub fn contains(&self, p: &Partition) -> bool {
        self.values.contains_key(p)
    }

    /// Inserts only if absent; returns whether the value was stored.
    pub fn insert_if_absent(&mut self, p: Partition, v: T) -> bool {
        use std::collections::btree_map::Entry;
        match self.values.entry(p) {
            Entry::Vacant(e) => {
                e.insert(v);
                true
            }
            Entry::Occupied(_) => false,
        }
    }

    pub fn insert(&mut self, p: Partition, v: T) -> Option<T> {
        self.values.insert(p, v)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Partition, T)> {
        self.values.iter().map(|(p, &v)| (p, v))
    }

    pub fn keys(&self) -> impl Iterator<Item = &Partition> {
        self.values.keys()
    }
}

impl<T: Copy> Default for PartitionMap<T> {
    fn default() -> Self {
        Self::new()
    }
}

impl<T: Copy> FromIterator<(Partition, T)> for PartitionMap<T> {
    fn from_iter<I: IntoIterator<Item = (Partition, T)>>(iter: I) -> Self {
        Self {
            values: iter.into_iter().collect(),
        }
    }
}

fn require_microscale<T: Scalar>(t: &Tpm<T>) -> Result<()> {
    if !t.is_microscale() {
        return Err(Error::InvalidConfig(
            "apportioning expects a microscale matrix with unit block weights".into(),
        ));
    }
    Ok(())
}

/// CP of the coarse-graining of `t` by each partition; evaluated in parallel.
pub fn compute_cp_all<T: Scalar>(t: &Tpm<T>, nodes: &[Partition]) -> Result<CpMap<T>> {
    require_microscale(t)?;
    let values = nodes
        .par_iter()
        .map(|p| t.coarse_grain(p).map(|m| (p.clone(), cp(&m))))
        .collect::<Result<Vec<_>>>()?;
    Ok(values.into_iter().collect())
}

/// ΔCP of every node relative to the best CP among its ancestors in `h`.
///
/// Ancestors are the nodes reachable downward along covering edges, so the
/// baseline of a node is the running maximum over its finer neighbours.
pub fn delta_cp<T: Scalar>(h: &HasseDiagram, cps: &CpMap<T>) -> Result<DeltaCpMap<T>> {
    let cp_of: Vec<T> = h
        .nodes()
        .iter()
        .map(|p| cps.get(p).ok_or_else(|| Error::MissingCp(p.to_string())))
        .collect::<Result<_>>()?;
    let mut best_below: Vec<Option<T>> = vec![None; h.len()];
    for v in h.bottom_up_order() {
        let mut best: Option<T> = None;
        for &d in h.down(v) {
            let cand = match best_below[d] {
                Some(b) => b.max(cp_of[d]),
                None => cp_of[d],
            };
            best = Some(best.map_or(cand, |b| b.max(cand)));
        }
        best_below[v] = best;
    }
    Ok(h.nodes()
        .iter()
        .enumerate()
        .map(|(v, p)| (p.clone(), cp_of[v] - best_below[v].unwrap_or_else(T::zero)))
        .collect())
}

/// The scales that contribute a positive ΔCP, anchored at the microscale.
#[derive(Debug, Clone)]
pub struct EmergentHierarchy<T> {
    diagram: HasseDiagram,
    anchor: Partition,
    delta: DeltaCpMap<T>,
    epsilon: T,
    micro_dim: usize,
    per_level: BTreeMap<usize, Vec<(Partition, T)>>,
}

impl<T: Scalar> EmergentHierarchy<T> {
    /// Diagram over the anchor and every member.
    pub fn diagram(&self) -> &HasseDiagram {
        &self.diagram
    }

    /// The finest partition, always present as the start of every path.
    pub fn anchor(&self) -> &Partition {
        &self.anchor
    }

    pub fn anchor_delta(&self) -> T {
        self.delta.get(&self.anchor).expect("anchor is always recorded")
    }

    /// ΔCP restricted to the hierarchy's nodes (anchor included).
    pub fn delta(&self) -> &DeltaCpMap<T> {
        &self.delta
    }

    pub fn delta_of(&self, p: &Partition) -> Option<T> {
        self.delta.get(p)
    }

    /// `L`, the number of microstates.
    pub fn micro_dim(&self) -> usize {
        self.micro_dim
    }

    pub fn epsilon(&self) -> T {
        self.epsilon
    }

    /// Non-anchor scales with ΔCP above the threshold, coarsest levels first.
    pub fn members(&self) -> Vec<(Partition, T)> {
        self.per_level
            .values()
            .flatten()
            .filter(|(p, _)| *p != self.anchor)
            .cloned()
            .collect()
    }

    /// Whether the microscale itself contributes a positive ΔCP.
    pub fn anchor_is_emergent(&self) -> bool {
        self.anchor_delta() > self.epsilon
    }

    /// Every scale with ΔCP above the threshold (the anchor included when it qualifies),
    /// grouped by block count.
    pub fn per_level(&self) -> &BTreeMap<usize, Vec<(Partition, T)>> {
        &self.per_level
    }

    /// Mean ΔCP of the contributing scales at each level `1..=L`; zero for empty levels.
    pub fn level_means(&self) -> Vec<T> {
        (1..=self.micro_dim)
            .map(|l| match self.per_level.get(&l) {
                Some(row) if !row.is_empty() => {
                    row.iter().map(|&(_, d)| d).sum::<T>() / T::from_usize_lossy(row.len())
                }
                _ => T::zero(),
            })
            .collect()
    }

    /// ΔCP-weighted mean level of [`EmergentHierarchy::level_means`]; `None` when nothing contributes.
    pub fn level_centroid(&self) -> Option<T> {
        let means = self.level_means();
        let mass: T = means.iter().copied().sum();
        if mass <= T::zero() {
            return None;
        }
        let moment: T = means
            .iter()
            .enumerate()
            .map(|(i, &m)| T::from_usize_lossy(i + 1) * m)
            .sum();
        Some(moment / mass)
    }

    /// Number of contributing scales, anchor included when it qualifies.
    pub fn contributor_count(&self) -> usize {
        self.per_level.values().map(Vec::len).sum()
    }
}

/// Selects the scales with ΔCP above `cfg.epsilon` and rebuilds their diagram.
///
/// The finest partition is always kept as the path anchor, whatever its ΔCP.
pub fn emergent_set<T: Scalar>(d: &DeltaCpMap<T>, cfg: &AnalysisConfig) -> Result<EmergentHierarchy<T>> {
    let n = d
        .keys()
        .next()
        .map(Partition::len)
        .ok_or_else(|| Error::InvalidConfig("empty ΔCP map".into()))?;
    let anchor = Partition::finest(n);
    let anchor_delta = d
        .get(&anchor)
        .ok_or_else(|| Error::MissingCp(anchor.to_string()))?;
    let epsilon = T::from_f64_lossy(cfg.epsilon());
    let mut delta = DeltaCpMap::new();
    delta.insert(anchor.clone(), anchor_delta);
    let mut per_level: BTreeMap<usize, Vec<(Partition, T)>> = BTreeMap::new();
    for (p, v) in d.iter() {
        if v > epsilon {
            delta.insert(p.clone(), v);
            per_level.entry(p.num_blocks()).or_default().push((p.clone(), v));
        }
    }
    let diagram = build_hasse(delta.keys().cloned())?;
    Ok(EmergentHierarchy {
        diagram,
        anchor,
        delta,
        epsilon,
        micro_dim: n,
        per_level,
    })
}

/// Full brute-force result over the complete partition lattice.
#[derive(Debug, Clone)]
pub struct Analysis<T> {
    pub diagram: HasseDiagram,
    pub cp: CpMap<T>,
    pub delta: DeltaCpMap<T>,
    pub hierarchy: EmergentHierarchy<T>,
}

/// Enumerates every scale of `t`, scores it and extracts the emergent hierarchy.
pub fn analyze<T: Scalar>(t: &Tpm<T>, cfg: &AnalysisConfig) -> Result<Analysis<T>> {
    analyze_capped(t, cfg, DEFAULT_ENUMERATION_CAP)
}

pub fn analyze_capped<T: Scalar>(t: &Tpm<T>, cfg: &AnalysisConfig, cap: usize) -> Result<Analysis<T>> {
    require_microscale(t)?;
    let nodes: Vec<Partition> = enumerate_partitions_capped(t.n(), cap)?.collect();
    let cp = compute_cp_all(t, &nodes)?;
    let diagram = build_hasse(nodes)?;
    let delta = delta_cp(&diagram, &cp)?;
    let hierarchy = emergent_set(&delta, cfg)?;
    Ok(Analysis {
        diagram,
        cp,
        delta,
        hierarchy,
    })
}
