//! The refinement order on partitions of a common ground set.

use super::Partition;
use crate::error::{Error, Result};

fn check_sizes(a: &Partition, b: &Partition) -> Result<()> {
    if a.len() != b.len() {
        return Err(Error::SizeMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    Ok(())
}

/// `true` iff every block of `a` lies inside some block of `b` (`a` is finer than or equal to `b`).
pub fn refines(a: &Partition, b: &Partition) -> Result<bool> {
    check_sizes(a, b)?;
    Ok(refines_unchecked(a, b))
}

pub(crate) fn refines_unchecked(a: &Partition, b: &Partition) -> bool {
    if a.num_blocks() < b.num_blocks() {
        return false;
    }
    let mut image = vec![u16::MAX; a.num_blocks()];
    for (&la, &lb) in a.labels().iter().zip(b.labels()) {
        let slot = &mut image[usize::from(la)];
        if *slot == u16::MAX {
            *slot = lb;
        } else if *slot != lb {
            return false;
        }
    }
    true
}

/// `true` iff `b` arises from `a` by merging exactly two blocks.
pub fn covers(a: &Partition, b: &Partition) -> Result<bool> {
    check_sizes(a, b)?;
    Ok(a.num_blocks() == b.num_blocks() + 1 && refines_unchecked(a, b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::enumerate_partitions;

    fn p(s: &str) -> Partition {
        s.parse().unwrap()
    }

    #[test]
    fn refinement_examples() {
        assert!(refines(&p("(0)(1)(2)"), &p("(0 1)(2)")).unwrap());
        assert!(!refines(&p("(0 1)(2)"), &p("(0)(1 2)")).unwrap());
        assert!(!refines(&p("(0)(1 2)"), &p("(0 1)(2)")).unwrap());
        let a = p("(0 2)(1)");
        assert!(refines(&a, &a).unwrap());
        assert!(matches!(
            refines(&p("(0)(1)"), &p("(0)(1)(2)")),
            Err(Error::SizeMismatch { .. })
        ));
    }

    #[test]
    fn covering_examples() {
        assert!(covers(&p("(0)(1)(2)"), &p("(0 1)(2)")).unwrap());
        assert!(!covers(&p("(0)(1)(2)"), &p("(0 1 2)")).unwrap());
        let a = p("(0 1)(2)");
        assert!(!covers(&a, &a).unwrap());
    }

    #[test]
    fn order_laws_hold_up_to_five() {
        for n in 1..=5 {
            let all: Vec<_> = enumerate_partitions(n).unwrap().collect();
            for a in &all {
                assert!(refines(a, a).unwrap());
                for b in &all {
                    let ab = refines(a, b).unwrap();
                    let ba = refines(b, a).unwrap();
                    if ab && ba {
                        assert_eq!(a, b);
                    }
                    if covers(a, b).unwrap() {
                        assert!(ab);
                        assert_eq!(a.num_blocks(), b.num_blocks() + 1);
                    }
                    if ab {
                        for c in &all {
                            if refines(b, c).unwrap() {
                                assert!(refines(a, c).unwrap());
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn matches_block_subset_definition() {
        // oracle: every block of a is a subset of some block of b
        let all: Vec<_> = enumerate_partitions(5).unwrap().collect();
        for a in &all {
            for b in &all {
                let bb = b.blocks();
                let expected = a
                    .blocks()
                    .iter()
                    .all(|blk| bb.iter().any(|c| blk.iter().all(|x| c.contains(x))));
                assert_eq!(refines(a, b).unwrap(), expected, "{a} vs {b}");
            }
        }
    }
}
