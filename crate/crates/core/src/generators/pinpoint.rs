//! Systems of disjoint diffusion cycles whose only emergent scale is chosen by design.

use crate::error::{Error, Result};
use crate::lattice::Partition;
use crate::scalar::Scalar;
use crate::tpm::Tpm;

pub const DEFAULT_STAY_PROB: f64 = 0.2;
pub const DEFAULT_STEP_PROB: f64 = 0.8;

/// Disjoint directed diffusion cycles plus deterministic fixed states.
///
/// States are laid out cycle by cycle, then the singletons. A state on a
/// cycle stays put with `stay_prob` and advances to its successor with
/// `step_prob`; singletons map to themselves.
#[derive(Debug, Clone, PartialEq)]
pub struct PinpointSpec {
    pub cycles: Vec<usize>,
    pub singletons: usize,
    pub stay_prob: f64,
    pub step_prob: f64,
}

impl PinpointSpec {
    /// `l` disjoint cycles with the default probabilities.
    pub fn disjoint_cycles(cycles: Vec<usize>) -> Self {
        Self {
            cycles,
            singletons: 0,
            stay_prob: DEFAULT_STAY_PROB,
            step_prob: DEFAULT_STEP_PROB,
        }
    }

    /// One cycle of size `c` and `level - 1` fixed states, so the designed scale has `level` states.
    pub fn cycle_with_fixed(c: usize, level: usize) -> Self {
        Self {
            cycles: vec![c],
            singletons: level.saturating_sub(1),
            stay_prob: DEFAULT_STAY_PROB,
            step_prob: DEFAULT_STEP_PROB,
        }
    }

    pub fn n(&self) -> usize {
        self.cycles.iter().sum::<usize>() + self.singletons
    }

    /// Number of states of the engineered macroscale.
    pub fn target_level(&self) -> usize {
        self.cycles.len() + self.singletons
    }

    fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidConfig(msg));
        if self.n() == 0 {
            return bad("pinpoint system has no states".into());
        }
        if self.cycles.iter().any(|&c| c == 0) {
            return bad("cycle sizes must be positive".into());
        }
        if !(0.0..=1.0).contains(&self.stay_prob) || !(0.0..=1.0).contains(&self.step_prob) {
            return bad("stay and step probabilities must lie in [0, 1]".into());
        }
        if (self.stay_prob + self.step_prob - 1.0).abs() > 1e-12 {
            return bad(format!(
                "stay_prob + step_prob must equal 1, got {}",
                self.stay_prob + self.step_prob
            ));
        }
        Ok(())
    }

    /// The partition that contracts every cycle and keeps every singleton.
    pub fn designed_partition(&self) -> Partition {
        let mut labels = Vec::with_capacity(self.n());
        for (b, &c) in self.cycles.iter().enumerate() {
            labels.extend(std::iter::repeat(b).take(c));
        }
        let base = self.cycles.len();
        labels.extend((0..self.singletons).map(|s| base + s));
        Partition::from_labels(&labels).expect("labels are valid")
    }
}

/// Block-diagonal transition matrix of `spec`.
pub fn pinpoint_tpm<T: Scalar>(spec: &PinpointSpec) -> Result<Tpm<T>> {
    spec.validate()?;
    let n = spec.n();
    let stay = T::from_f64_lossy(spec.stay_prob);
    let step = T::from_f64_lossy(spec.step_prob);
    let mut data = vec![T::zero(); n * n];
    let mut offset = 0;
    for &c in &spec.cycles {
        for s in 0..c {
            let state = offset + s;
            if c == 1 {
                data[state * n + state] = T::one();
            } else {
                data[state * n + state] = stay;
                data[state * n + offset + (s + 1) % c] += step;
            }
        }
        offset += c;
    }
    for state in offset..n {
        data[state * n + state] = T::one();
    }
    Tpm::from_flat(n, data)
}
