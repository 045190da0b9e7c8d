//! Counting and uniform sampling of covering-edge chains through a diagram.

use rand::Rng;

use super::{HasseDiagram, Partition};
use crate::error::{Error, Result};

/// Path counts from every node to a target set, ready for exact enumeration
/// or uniform sampling of `bottom -> target` chains.
///
/// Counts are `u128` and saturate; sampling stays uniform as long as the
/// total count does not saturate.
#[derive(Debug, Clone)]
pub struct PathCounter<'a> {
    diagram: &'a HasseDiagram,
    bottom: usize,
    is_target: Vec<bool>,
    counts: Vec<u128>,
}

impl<'a> PathCounter<'a> {
    fn new(diagram: &'a HasseDiagram, bottom: usize, is_target: Vec<bool>) -> Self {
        let mut counts = vec![0u128; diagram.len()];
        // levels ascend in block count and edges step to fewer blocks,
        // so every node's coarser neighbours are finished first
        for ids in diagram.levels().values() {
            for &v in ids {
                counts[v] = if is_target[v] {
                    1
                } else {
                    diagram
                        .up(v)
                        .iter()
                        .fold(0u128, |acc, &u| acc.saturating_add(counts[u]))
                };
            }
        }
        Self {
            diagram,
            bottom,
            is_target,
            counts,
        }
    }

    /// Chains from `bottom` that end at `top`.
    pub fn between(diagram: &'a HasseDiagram, bottom: &Partition, top: &Partition) -> Result<Self> {
        let b = diagram
            .id_of(bottom)
            .ok_or_else(|| Error::NodeNotFound(bottom.to_string()))?;
        let t = diagram
            .id_of(top)
            .ok_or_else(|| Error::NodeNotFound(top.to_string()))?;
        let mut is_target = vec![false; diagram.len()];
        is_target[t] = true;
        let pc = Self::new(diagram, b, is_target);
        if pc.count() == 0 {
            return Err(Error::NoPath {
                bottom: bottom.to_string(),
                top: top.to_string(),
            });
        }
        Ok(pc)
    }

    /// Maximal chains from `bottom`: every path ends at a node with no coarser neighbour.
    pub fn to_maximal(diagram: &'a HasseDiagram, bottom: &Partition) -> Result<Self> {
        let b = diagram
            .id_of(bottom)
            .ok_or_else(|| Error::NodeNotFound(bottom.to_string()))?;
        let is_target = (0..diagram.len()).map(|v| diagram.up(v).is_empty()).collect();
        Ok(Self::new(diagram, b, is_target))
    }

    pub fn diagram(&self) -> &'a HasseDiagram {
        self.diagram
    }

    /// Total number of chains from the bottom node.
    pub fn count(&self) -> u128 {
        self.counts[self.bottom]
    }

    /// Draws one chain uniformly at random; node ids from bottom to target.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<usize> {
        let mut path = vec![self.bottom];
        let mut v = self.bottom;
        while !self.is_target[v] {
            let total = self.counts[v];
            let mut pick = rng.gen_range(0..total);
            let mut next = None;
            for &u in self.diagram.up(v) {
                let c = self.counts[u];
                if pick < c {
                    next = Some(u);
                    break;
                }
                pick -= c;
            }
            v = next.expect("counts are consistent with the edges");
            path.push(v);
        }
        path
    }

    /// All chains in lexicographic order of node ids, at most `limit` of them.
    pub fn enumerate(&self, limit: usize) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut stack = vec![self.bottom];
        self.dfs(&mut stack, &mut out, limit);
        out
    }

    fn dfs(&self, stack: &mut Vec<usize>, out: &mut Vec<Vec<usize>>, limit: usize) {
        if out.len() >= limit {
            return;
        }
        let v = *stack.last().expect("non-empty stack");
        if self.is_target[v] {
            out.push(stack.clone());
            return;
        }
        for &u in self.diagram.up(v) {
            if self.counts[u] > 0 {
                stack.push(u);
                self.dfs(stack, out, limit);
                stack.pop();
            }
        }
    }
}

/// Path count and sampler for chains from `bottom` to `top`.
pub fn paths_between<'a>(
    h: &'a HasseDiagram,
    bottom: &Partition,
    top: &Partition,
) -> Result<PathCounter<'a>> {
    PathCounter::between(h, bottom, top)
}
