//! Set partitions of `{0, .., n-1}` stored as restricted growth strings.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

const RGS_DIGITS: &[u8] = b"0123456789abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ";

/// A set partition in canonical restricted-growth form.
///
/// `labels[i]` is the block id of element `i`; block ids appear in increasing
/// order of first occurrence, so `labels[0] == 0` and each label is at most one
/// more than the maximum of the labels before it. Equality, ordering and
/// hashing are on the label vector, which makes the representation a unique key.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Partition {
    labels: Vec<u16>,
    n_blocks: usize,
}

impl Partition {
    /// All singletons: the microscale.
    pub fn finest(n: usize) -> Self {
        assert!(n <= u16::MAX as usize + 1, "ground set too large");
        Self {
            labels: (0..n).map(|i| i as u16).collect(),
            n_blocks: n,
        }
    }

    /// One block holding every element.
    pub fn coarsest(n: usize) -> Self {
        Self {
            labels: vec![0; n],
            n_blocks: usize::from(n > 0),
        }
    }

    /// Builds a partition from arbitrary labels, relabeling blocks into canonical order.
    pub fn from_labels<L: Copy + Eq + std::hash::Hash>(labels: &[L]) -> Result<Self> {
        let mut seen = std::collections::HashMap::new();
        let mut out = Vec::with_capacity(labels.len());
        for &l in labels {
            let next = seen.len();
            let id = *seen.entry(l).or_insert(next);
            if id > u16::MAX as usize {
                return Err(Error::InvalidPartition("more than 65536 blocks".into()));
            }
            out.push(id as u16);
        }
        let n_blocks = seen.len();
        Ok(Self {
            labels: out,
            n_blocks,
        })
    }

    /// Accepts a label vector only if it already is a restricted growth string.
    pub fn from_rgs(labels: Vec<u16>) -> Result<Self> {
        let mut next = 0u32;
        for (i, &l) in labels.iter().enumerate() {
            if u32::from(l) > next {
                return Err(Error::InvalidPartition(format!(
                    "label {l} at position {i} skips ahead of {next}"
                )));
            }
            if u32::from(l) == next {
                next += 1;
            }
        }
        Ok(Self {
            labels,
            n_blocks: next as usize,
        })
    }

    /// Builds a partition from explicit blocks, which must be disjoint and cover `0..n`.
    pub fn from_blocks(n: usize, blocks: &[Vec<usize>]) -> Result<Self> {
        let mut labels = vec![usize::MAX; n];
        for (b, block) in blocks.iter().enumerate() {
            if block.is_empty() {
                return Err(Error::InvalidPartition(format!("block {b} is empty")));
            }
            for &i in block {
                if i >= n {
                    return Err(Error::InvalidPartition(format!(
                        "element {i} outside 0..{n}"
                    )));
                }
                if labels[i] != usize::MAX {
                    return Err(Error::InvalidPartition(format!(
                        "element {i} appears in more than one block"
                    )));
                }
                labels[i] = b;
            }
        }
        if let Some(i) = labels.iter().position(|&l| l == usize::MAX) {
            return Err(Error::InvalidPartition(format!("element {i} is not covered")));
        }
        Self::from_labels(&labels)
    }

    /// Size of the ground set.
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// Number of blocks, i.e. the level of this scale in the lattice.
    pub fn num_blocks(&self) -> usize {
        self.n_blocks
    }

    pub fn labels(&self) -> &[u16] {
        &self.labels
    }

    #[inline]
    pub fn block_of(&self, element: usize) -> usize {
        usize::from(self.labels[element])
    }

    /// Blocks ordered by their smallest element, elements ascending.
    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let mut blocks = vec![Vec::new(); self.n_blocks];
        for (i, &l) in self.labels.iter().enumerate() {
            blocks[usize::from(l)].push(i);
        }
        blocks
    }

    pub fn is_finest(&self) -> bool {
        self.n_blocks == self.labels.len()
    }

    pub fn is_coarsest(&self) -> bool {
        self.n_blocks <= 1
    }

    /// Merges blocks `a` and `b` (block ids, not elements).
    ///
    /// The merged block keeps the smaller id and the larger id is removed, so
    /// the remaining blocks keep their relative order.
    pub fn merge(&self, a: usize, b: usize) -> Result<Self> {
        if a >= self.n_blocks || b >= self.n_blocks {
            return Err(Error::IndexOutOfRange {
                index: a.max(b),
                n: self.n_blocks,
            });
        }
        if a == b {
            return Err(Error::InvalidPartition("cannot merge a block with itself".into()));
        }
        let (keep, gone) = if a < b { (a as u16, b as u16) } else { (b as u16, a as u16) };
        let labels = self
            .labels
            .iter()
            .map(|&l| match l {
                l if l == gone => keep,
                l if l > gone => l - 1,
                l => l,
            })
            .collect();
        Ok(Self {
            labels,
            n_blocks: self.n_blocks - 1,
        })
    }

    /// Image of this partition under the element relabeling `i -> perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        if perm.len() != self.len() {
            return Err(Error::SizeMismatch {
                left: self.len(),
                right: perm.len(),
            });
        }
        let mut labels = vec![0u16; self.len()];
        for (i, &p) in perm.iter().enumerate() {
            labels[p] = self.labels[i];
        }
        Self::from_labels(&labels)
    }

    /// Restricted growth string, one character per element (`0-9a-zA-Z`).
    ///
    /// Returns `None` when the partition has more than 62 blocks.
    pub fn to_rgs_string(&self) -> Option<String> {
        if self.n_blocks > RGS_DIGITS.len() {
            return None;
        }
        Some(
            self.labels
                .iter()
                .map(|&l| RGS_DIGITS[usize::from(l)] as char)
                .collect(),
        )
    }

    /// Parses the restricted-growth-string form produced by [`Partition::to_rgs_string`].
    pub fn parse_rgs(s: &str) -> Result<Self> {
        let labels = s
            .bytes()
            .map(|c| {
                RGS_DIGITS
                    .iter()
                    .position(|&d| d == c)
                    .map(|p| p as u16)
                    .ok_or_else(|| Error::InvalidPartition(format!("bad character {:?}", c as char)))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_rgs(labels)
    }

    /// Parses block notation such as `(0 1)(2)(3 4)`.
    pub fn parse_blocks(s: &str) -> Result<Self> {
        let mut blocks = Vec::new();
        let mut rest = s.trim();
        while !rest.is_empty() {
            let inner = rest
                .strip_prefix('(')
                .ok_or_else(|| Error::InvalidPartition(format!("expected '(' in {s:?}")))?;
            let close = inner
                .find(')')
                .ok_or_else(|| Error::InvalidPartition(format!("unclosed block in {s:?}")))?;
            let block = inner[..close]
                .split_whitespace()
                .map(|t| {
                    t.parse::<usize>()
                        .map_err(|_| Error::InvalidPartition(format!("bad element {t:?}")))
                })
                .collect::<Result<Vec<_>>>()?;
            blocks.push(block);
            rest = inner[close + 1..].trim_start();
        }
        let n = blocks.iter().map(Vec::len).sum();
        Self::from_blocks(n, &blocks)
    }
}

/// Block notation, e.g. `(0 1)(2)(3 4)`.
impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for block in self.blocks() {
            f.write_str("(")?;
            for (k, i) in block.iter().enumerate() {
                if k > 0 {
                    f.write_str(" ")?;
                }
                write!(f, "{i}")?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Partition{self}")
    }
}

/// Accepts either block notation (starts with `(`) or a restricted growth string.
impl FromStr for Partition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.trim_start().starts_with('(') {
            Self::parse_blocks(s)
        } else {
            Self::parse_rgs(s.trim())
        }
    }
}
