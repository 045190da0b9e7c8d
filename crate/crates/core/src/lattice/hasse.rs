//! Hasse diagrams of the refinement order over arbitrary sets of partitions.

use std::collections::{BTreeMap, HashMap, VecDeque};

use rayon::prelude::*;

use super::order::refines_unchecked;
use super::{bell, Partition, MAX_EXACT_COUNT_N};
use crate::error::{Error, Result};

/// Covering graph of the refinement order restricted to a node set.
///
/// Node ids are positions in [`HasseDiagram::nodes`], which is sorted by
/// canonical label order. An edge `a -> b` means `a < b` with no other node of
/// the set strictly between them; for the full lattice that is exactly "merge
/// two blocks of `a`".
#[derive(Debug, Clone)]
pub struct HasseDiagram {
    n: usize,
    nodes: Vec<Partition>,
    index: HashMap<Partition, usize>,
    up: Vec<Vec<usize>>,
    down: Vec<Vec<usize>>,
    levels: BTreeMap<usize, Vec<usize>>,
}

impl HasseDiagram {
    /// Ground set size shared by every node.
    pub fn ground_size(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[Partition] {
        &self.nodes
    }

    pub fn node(&self, id: usize) -> &Partition {
        &self.nodes[id]
    }

    pub fn id_of(&self, p: &Partition) -> Option<usize> {
        self.index.get(p).copied()
    }

    pub fn contains(&self, p: &Partition) -> bool {
        self.index.contains_key(p)
    }

    /// Coarser neighbours of a node.
    pub fn up(&self, id: usize) -> &[usize] {
        &self.up[id]
    }

    /// Finer neighbours of a node.
    pub fn down(&self, id: usize) -> &[usize] {
        &self.down[id]
    }

    /// Covering edges as `(finer, coarser)` node id pairs, in id order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.up
            .iter()
            .enumerate()
            .flat_map(|(a, ups)| ups.iter().map(move |&b| (a, b)))
    }

    pub fn edge_count(&self) -> usize {
        self.up.iter().map(Vec::len).sum()
    }

    /// Node ids grouped by block count.
    pub fn levels(&self) -> &BTreeMap<usize, Vec<usize>> {
        &self.levels
    }

    pub fn level(&self, blocks: usize) -> &[usize] {
        self.levels.get(&blocks).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Node ids in order of decreasing block count, so every edge points forward.
    pub fn bottom_up_order(&self) -> Vec<usize> {
        self.levels.values().rev().flatten().copied().collect()
    }

    /// The all-singletons node, if present.
    pub fn finest(&self) -> Option<usize> {
        self.id_of(&Partition::finest(self.n))
    }

    /// Nodes without coarser neighbours.
    pub fn maximal(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.up[i].is_empty()).collect()
    }

    fn require(&self, p: &Partition) -> Result<usize> {
        self.id_of(p)
            .ok_or_else(|| Error::NodeNotFound(p.to_string()))
    }

    /// Ids of every node strictly finer than `id`, ascending.
    pub fn ancestor_ids(&self, id: usize) -> Vec<usize> {
        let mut seen = vec![false; self.len()];
        let mut queue: VecDeque<usize> = self.down[id].iter().copied().collect();
        for &d in &self.down[id] {
            seen[d] = true;
        }
        let mut out = Vec::new();
        while let Some(v) = queue.pop_front() {
            out.push(v);
            for &d in &self.down[v] {
                if !seen[d] {
                    seen[d] = true;
                    queue.push_back(d);
                }
            }
        }
        out.sort_unstable();
        out
    }
}

/// Builds the covering graph of the refinement order over `nodes`.
///
/// Duplicates are dropped. When the set is the complete lattice the edges are
/// generated by single merges; otherwise comparable pairs are found by direct
/// checks and reduced transitively.
pub fn build_hasse<I: IntoIterator<Item = Partition>>(nodes: I) -> Result<HasseDiagram> {
    let mut nodes: Vec<Partition> = nodes.into_iter().collect();
    nodes.sort_unstable();
    nodes.dedup();
    let n = nodes.first().map_or(0, Partition::len);
    if let Some(bad) = nodes.iter().find(|p| p.len() != n) {
        return Err(Error::SizeMismatch {
            left: n,
            right: bad.len(),
        });
    }
    let index: HashMap<Partition, usize> = nodes
        .iter()
        .enumerate()
        .map(|(i, p)| (p.clone(), i))
        .collect();
    let mut levels: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (i, p) in nodes.iter().enumerate() {
        levels.entry(p.num_blocks()).or_default().push(i);
    }

    let full = n >= 1 && n <= MAX_EXACT_COUNT_N && nodes.len() as u64 == bell(n);
    let up: Vec<Vec<usize>> = if full {
        nodes
            .par_iter()
            .map(|p| {
                let k = p.num_blocks();
                let mut ups = Vec::with_capacity(k * k.saturating_sub(1) / 2);
                for i in 0..k {
                    for j in i + 1..k {
                        let q = p.merge(i, j).expect("block ids in range");
                        ups.push(index[&q]);
                    }
                }
                ups.sort_unstable();
                ups
            })
            .collect()
    } else {
        (0..nodes.len())
            .into_par_iter()
            .map(|a| reduced_up_set(&nodes, &levels, a))
            .collect()
    };

    let mut down = vec![Vec::new(); nodes.len()];
    for (a, ups) in up.iter().enumerate() {
        for &b in ups {
            down[b].push(a);
        }
    }

    Ok(HasseDiagram {
        n,
        nodes,
        index,
        up,
        down,
        levels,
    })
}

fn reduced_up_set(nodes: &[Partition], levels: &BTreeMap<usize, Vec<usize>>, a: usize) -> Vec<usize> {
    let pa = &nodes[a];
    let mut covers: Vec<usize> = Vec::new();
    // finer candidates first: any non-cover above `a` lies above an earlier cover
    for (_, ids) in levels.range(..pa.num_blocks()).rev() {
        for &b in ids {
            let pb = &nodes[b];
            if refines_unchecked(pa, pb) && !covers.iter().any(|&c| refines_unchecked(&nodes[c], pb)) {
                covers.push(b);
            }
        }
    }
    covers.sort_unstable();
    covers
}

/// Every node of `h` strictly finer than `p`.
pub fn ancestors(h: &HasseDiagram, p: &Partition) -> Result<Vec<Partition>> {
    let id = h.require(p)?;
    Ok(h.ancestor_ids(id).into_iter().map(|i| h.nodes[i].clone()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{enumerate_partitions, refines, stirling2};

    fn p(s: &str) -> Partition {
        s.parse().unwrap()
    }

    fn full(n: usize) -> HasseDiagram {
        build_hasse(enumerate_partitions(n).unwrap()).unwrap()
    }

    /// Covering pairs by brute force over all ordered pairs of the node set.
    fn brute_force_edges(nodes: &[Partition]) -> Vec<(Partition, Partition)> {
        let mut edges = Vec::new();
        for a in nodes {
            for b in nodes {
                if a == b || !refines(a, b).unwrap() {
                    continue;
                }
                let between = nodes
                    .iter()
                    .any(|c| c != a && c != b && refines(a, c).unwrap() && refines(c, b).unwrap());
                if !between {
                    edges.push((a.clone(), b.clone()));
                }
            }
        }
        edges.sort();
        edges
    }

    fn edge_set(h: &HasseDiagram) -> Vec<(Partition, Partition)> {
        let mut e: Vec<_> = h
            .edges()
            .map(|(a, b)| (h.node(a).clone(), h.node(b).clone()))
            .collect();
        e.sort();
        e
    }

    #[test]
    fn full_lattice_three() {
        let h = full(3);
        assert_eq!(h.len(), 5);
        assert_eq!(h.edge_count(), 6);
        let nodes: Vec<_> = h.nodes().to_vec();
        assert_eq!(edge_set(&h), brute_force_edges(&nodes));
    }

    #[test]
    fn subset_edges_skip_missing_intermediates() {
        let h = build_hasse([Partition::finest(4), Partition::coarsest(4)]).unwrap();
        assert_eq!(h.edge_count(), 1);
        let (a, b) = h.edges().next().unwrap();
        assert!(h.node(a).is_finest());
        assert!(h.node(b).is_coarsest());
    }

    #[test]
    fn subset_edges_match_brute_force() {
        let all: Vec<_> = enumerate_partitions(5).unwrap().collect();
        // deterministic pseudo-random subsets
        let mut state = 0x9e37_79b9_7f4a_7c15u64;
        for _ in 0..20 {
            let subset: Vec<_> = all
                .iter()
                .filter(|_| {
                    state ^= state << 13;
                    state ^= state >> 7;
                    state ^= state << 17;
                    state % 3 == 0
                })
                .cloned()
                .collect();
            let h = build_hasse(subset.clone()).unwrap();
            let mut sorted = subset.clone();
            sorted.sort();
            assert_eq!(edge_set(&h), brute_force_edges(&sorted));
        }
    }

    #[test]
    fn full_lattice_levels_are_stirling() {
        let h = full(8);
        assert_eq!(h.len(), 4140);
        for k in 1..=8 {
            assert_eq!(h.level(k).len() as u64, stirling2(8, k));
        }
        for (a, b) in h.edges() {
            assert_eq!(h.node(a).num_blocks(), h.node(b).num_blocks() + 1);
        }
    }

    #[test]
    fn full_lattice_fast_path_matches_reduction() {
        let all: Vec<_> = enumerate_partitions(5).unwrap().collect();
        let h = full(5);
        let nodes: Vec<_> = h.nodes().to_vec();
        let levels = h.levels().clone();
        for a in 0..all.len() {
            assert_eq!(h.up(a), reduced_up_set(&nodes, &levels, a).as_slice());
        }
    }

    #[test]
    fn every_non_top_node_has_a_cover() {
        for n in 1..=6 {
            let h = full(n);
            for i in 0..h.len() {
                assert_eq!(h.up(i).is_empty(), h.node(i).is_coarsest());
            }
        }
    }

    #[test]
    fn ancestor_queries() {
        let h = full(3);
        assert!(ancestors(&h, &Partition::finest(3)).unwrap().is_empty());
        let top = ancestors(&h, &Partition::coarsest(3)).unwrap();
        assert_eq!(top.len(), 4);
        assert_eq!(ancestors(&h, &p("(0 1)(2)")).unwrap(), vec![Partition::finest(3)]);
        assert!(matches!(
            ancestors(&h, &Partition::finest(4)),
            Err(Error::NodeNotFound(_))
        ));
    }

    #[test]
    fn ancestors_match_refinement_order() {
        let h = full(5);
        for id in 0..h.len() {
            let expected: Vec<usize> = (0..h.len())
                .filter(|&q| q != id && refines(h.node(q), h.node(id)).unwrap())
                .collect();
            assert_eq!(h.ancestor_ids(id), expected);
        }
    }

    #[test]
    fn mixed_sizes_rejected() {
        assert!(matches!(
            build_hasse([Partition::finest(3), Partition::finest(4)]),
            Err(Error::SizeMismatch { .. })
        ));
    }
}
