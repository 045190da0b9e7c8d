//! Exhaustive enumeration of set partitions and the Bell / Stirling counts.

use super::Partition;
use crate::error::{Error, Result};

/// Default ceiling on `n` for exhaustive enumeration; Bell(12) is about 4.2 million.
pub const DEFAULT_ENUMERATION_CAP: usize = 12;

/// Largest `n` for which [`bell`] and [`stirling2`] are exact in `u64`.
pub const MAX_EXACT_COUNT_N: usize = 25;

/// Iterator over every partition of `{0, .., n-1}` in lexicographic RGS order.
#[derive(Debug, Clone)]
pub struct Partitions {
    labels: Vec<u16>,
    // prefix maxima: max_before[i] = max(labels[..i])
    max_before: Vec<u16>,
    done: bool,
}

impl Partitions {
    fn new(n: usize) -> Self {
        Self {
            labels: vec![0; n],
            max_before: vec![0; n],
            done: n == 0,
        }
    }

    fn advance(&mut self) {
        let n = self.labels.len();
        let mut i = n;
        while i > 1 {
            i -= 1;
            if self.labels[i] <= self.max_before[i] {
                self.labels[i] += 1;
                let m = self.max_before[i].max(self.labels[i]);
                for j in i + 1..n {
                    self.labels[j] = 0;
                    self.max_before[j] = m;
                }
                return;
            }
        }
        self.done = true;
    }
}

impl Iterator for Partitions {
    type Item = Partition;

    fn next(&mut self) -> Option<Partition> {
        if self.done {
            return None;
        }
        let p = Partition::from_rgs(self.labels.clone()).expect("enumeration stays canonical");
        self.advance();
        Some(p)
    }
}

/// Streams every partition of an `n`-set, guarding against Bell-number blowups.
pub fn enumerate_partitions(n: usize) -> Result<Partitions> {
    enumerate_partitions_capped(n, DEFAULT_ENUMERATION_CAP)
}

pub fn enumerate_partitions_capped(n: usize, cap: usize) -> Result<Partitions> {
    if n == 0 {
        return Err(Error::InvalidConfig("cannot enumerate partitions of an empty set".into()));
    }
    if n > cap {
        return Err(Error::CapExceeded { n, cap });
    }
    Ok(Partitions::new(n))
}

/// Stirling number of the second kind: partitions of an `n`-set into `k` blocks.
pub fn stirling2(n: usize, k: usize) -> u64 {
    assert!(n <= MAX_EXACT_COUNT_N, "stirling2 is exact only up to n = 25");
    stirling_row(n).get(k).copied().unwrap_or(0)
}

/// Bell number: the total number of partitions of an `n`-set.
pub fn bell(n: usize) -> u64 {
    assert!(n <= MAX_EXACT_COUNT_N, "bell is exact only up to n = 25");
    stirling_row(n).iter().sum()
}

fn stirling_row(n: usize) -> Vec<u64> {
    // S(m, k) = k S(m-1, k) + S(m-1, k-1)
    let mut row = vec![1u64];
    for m in 1..=n {
        let mut next = vec![0u64; m + 1];
        for k in 1..=m {
            let stay = if k < row.len() { k as u64 * row[k] } else { 0 };
            next[k] = stay + row[k - 1];
        }
        row = next;
    }
    row
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn counts_match_bell_numbers() {
        for (n, expected) in [(1, 1), (2, 2), (3, 5), (4, 15), (5, 52), (7, 877), (8, 4140)] {
            assert_eq!(enumerate_partitions(n).unwrap().count(), expected, "n = {n}");
            assert_eq!(bell(n), expected as u64);
        }
    }

    #[test]
    fn stirling_examples() {
        assert_eq!(stirling2(4, 2), 7);
        assert_eq!(stirling2(0, 0), 1);
        assert_eq!(stirling2(5, 0), 0);
        assert_eq!(stirling2(5, 6), 0);
        assert_eq!(bell(25), 4_638_590_332_229_999_353);
    }

    #[test]
    fn stirling2_matches_brute_force() {
        // count k-block labelings of an n-set by enumerating all k^n surjections / k!
        for n in 1..=6usize {
            for k in 1..=n {
                let mut seen = HashSet::new();
                let total = k.pow(n as u32);
                for code in 0..total {
                    let mut c = code;
                    let labels: Vec<usize> = (0..n)
                        .map(|_| {
                            let l = c % k;
                            c /= k;
                            l
                        })
                        .collect();
                    let p = Partition::from_labels(&labels).unwrap();
                    if p.num_blocks() == k {
                        seen.insert(p);
                    }
                }
                assert_eq!(seen.len() as u64, stirling2(n, k), "S({n},{k})");
            }
        }
    }

    #[test]
    fn enumeration_is_unique_and_sorted() {
        let all: Vec<_> = enumerate_partitions(6).unwrap().collect();
        let unique: HashSet<_> = all.iter().cloned().collect();
        assert_eq!(unique.len(), all.len());
        assert!(all.windows(2).all(|w| w[0] < w[1]));
        assert!(all[0].is_coarsest());
        assert!(all.last().unwrap().is_finest());
    }

    #[test]
    fn cap_guards_enumeration() {
        assert!(matches!(
            enumerate_partitions(13),
            Err(Error::CapExceeded { n: 13, cap: 12 })
        ));
        assert!(enumerate_partitions_capped(3, 2).is_err());
        assert!(enumerate_partitions(0).is_err());
    }
}
