//! Determinism, degeneracy and the combined causal primitives score (CP).
//!
//! All quantities assume a uniform intervention distribution over the states
//! of the scale being measured and are normalized by `log2 n`.

use crate::error::{Error, Result};
use crate::scalar::{entropy_bits, Scalar};
use crate::tpm::Tpm;

/// Default threshold above which a ΔCP value counts as a genuine gain.
pub const DEFAULT_EPSILON: f64 = 1e-9;

/// Settings for lattice-wide apportioning.
///
/// The intervention prior is always uniform at each scale and logarithms are
/// base two; only the positivity threshold is configurable.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnalysisConfig {
    epsilon: f64,
}

impl AnalysisConfig {
    pub fn new(epsilon: f64) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon < 1e-3) {
            return Err(Error::InvalidConfig(format!(
                "epsilon must lie in (0, 1e-3), got {epsilon}"
            )));
        }
        Ok(Self { epsilon })
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        Self {
            epsilon: DEFAULT_EPSILON,
        }
    }
}

/// The four primitives of one scale, computed in a single pass.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CausalPrimitives<T> {
    pub determinism: T,
    pub degeneracy: T,
    pub specificity: T,
    pub cp: T,
}

fn require_multi_state<T: Scalar>(t: &Tpm<T>) -> Result<T> {
    if t.n() < 2 {
        return Err(Error::SingleStateScale);
    }
    Ok(T::from_usize_lossy(t.n()).log2())
}

fn clamp_unit<T: Scalar>(x: T) -> T {
    x.max(T::zero()).min(T::one())
}

/// `H(E | c)` in bits.
pub fn row_entropy<T: Scalar>(t: &Tpm<T>, cause: usize) -> T {
    entropy_bits(t.row(cause).iter().copied())
}

/// Mean effect distribution under a uniform prior over causes.
pub fn effect_distribution<T: Scalar>(t: &Tpm<T>) -> Vec<T> {
    let n = t.n();
    let mut marginal = vec![T::zero(); n];
    for row in t.rows() {
        for (m, &v) in marginal.iter_mut().zip(row) {
            *m += v;
        }
    }
    let inv = T::one() / T::from_usize_lossy(n);
    marginal.iter_mut().for_each(|m| *m *= inv);
    marginal
}

/// `1 - H(E|c) / log2 n` for a single cause.
pub fn determinism_of_cause<T: Scalar>(t: &Tpm<T>, cause: usize) -> Result<T> {
    let log_n = require_multi_state(t)?;
    if cause >= t.n() {
        return Err(Error::IndexOutOfRange {
            index: cause,
            n: t.n(),
        });
    }
    Ok(clamp_unit(T::one() - row_entropy(t, cause) / log_n))
}

/// System-wide determinism: the uniform average of [`determinism_of_cause`].
pub fn determinism<T: Scalar>(t: &Tpm<T>) -> Result<T> {
    let log_n = require_multi_state(t)?;
    Ok(clamp_unit(T::one() - conditional_entropy(t) / log_n))
}

/// `H(E | C)` in bits under the uniform prior.
pub fn conditional_entropy<T: Scalar>(t: &Tpm<T>) -> T {
    let total: T = (0..t.n()).map(|c| row_entropy(t, c)).sum();
    total / T::from_usize_lossy(t.n())
}

/// `1 - H(E) / log2 n` with `E` the uniform mixture of rows.
pub fn degeneracy<T: Scalar>(t: &Tpm<T>) -> Result<T> {
    let log_n = require_multi_state(t)?;
    let h = entropy_bits(effect_distribution(t));
    Ok(clamp_unit(T::one() - h / log_n))
}

pub fn specificity<T: Scalar>(t: &Tpm<T>) -> Result<T> {
    Ok(T::one() - degeneracy(t)?)
}

/// All four primitives; errors on single-state scales.
pub fn primitives<T: Scalar>(t: &Tpm<T>) -> Result<CausalPrimitives<T>> {
    let log_n = require_multi_state(t)?;
    let determinism = clamp_unit(T::one() - conditional_entropy(t) / log_n);
    let degeneracy = clamp_unit(T::one() - entropy_bits(effect_distribution(t)) / log_n);
    let specificity = T::one() - degeneracy;
    let cp = clamp_unit(determinism + specificity - T::one());
    Ok(CausalPrimitives {
        determinism,
        degeneracy,
        specificity,
        cp,
    })
}

/// Causal primitives score: `determinism + specificity - 1`, in `[0, 1]`.
///
/// A one-state scale constrains nothing and scores 0.
pub fn cp<T: Scalar>(t: &Tpm<T>) -> T {
    match primitives(t) {
        Ok(p) => p.cp,
        Err(_) => T::zero(),
    }
}

impl<T: Scalar> Tpm<T> {
    pub fn determinism(&self) -> Result<T> {
        determinism(self)
    }

    pub fn degeneracy(&self) -> Result<T> {
        degeneracy(self)
    }

    pub fn specificity(&self) -> Result<T> {
        specificity(self)
    }

    pub fn cp(&self) -> T {
        cp(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(rows: &[&[f64]]) -> Tpm<f64> {
        Tpm::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn determinism_of_single_causes() {
        let id = Tpm::<f64>::identity(4);
        assert_eq!(determinism_of_cause(&id, 0).unwrap(), 1.0);
        let u = Tpm::<f64>::uniform(4);
        assert!(determinism_of_cause(&u, 0).unwrap().abs() < 1e-15);
        let m = t(&[
            &[0.5, 0.5, 0.0, 0.0],
            &[0.0, 1.0, 0.0, 0.0],
            &[0.0, 0.0, 1.0, 0.0],
            &[0.0, 0.0, 0.0, 1.0],
        ]);
        assert!((determinism_of_cause(&m, 0).unwrap() - 0.5).abs() < 1e-15);
        assert!(determinism_of_cause(&m, 4).is_err());
    }

    #[test]
    fn anchors() {
        let perm = Tpm::<f64>::deterministic(&[2, 0, 3, 1]).unwrap();
        let p = primitives(&perm).unwrap();
        assert_eq!((p.determinism, p.degeneracy, p.specificity, p.cp), (1.0, 0.0, 1.0, 1.0));

        let all_to_one = Tpm::<f64>::deterministic(&[0, 0, 0, 0]).unwrap();
        let p = primitives(&all_to_one).unwrap();
        assert_eq!((p.determinism, p.degeneracy, p.specificity, p.cp), (1.0, 1.0, 0.0, 0.0));

        let u = primitives(&Tpm::<f64>::uniform(5)).unwrap();
        assert!(u.determinism.abs() < 1e-12 && u.degeneracy.abs() < 1e-12 && u.cp.abs() < 1e-12);
        assert!((u.specificity - 1.0).abs() < 1e-12);
    }

    #[test]
    fn cp_permutation_and_uniform_eight() {
        let perm = Tpm::<f64>::deterministic(&[1, 2, 3, 4, 5, 6, 7, 0]).unwrap();
        assert_eq!(cp(&perm), 1.0);
        assert!(cp(&Tpm::<f64>::uniform(8)).abs() < 1e-12);
    }

    #[test]
    fn single_state_scale() {
        let one = Tpm::<f64>::identity(1);
        assert_eq!(cp(&one), 0.0);
        assert_eq!(determinism(&one), Err(Error::SingleStateScale));
        assert_eq!(degeneracy(&one), Err(Error::SingleStateScale));
        assert_eq!(determinism_of_cause(&one, 0), Err(Error::SingleStateScale));
    }

    #[test]
    fn epsilon_bounds() {
        assert!(AnalysisConfig::new(0.0).is_err());
        assert!(AnalysisConfig::new(1e-3).is_err());
        assert_eq!(AnalysisConfig::new(1e-6).unwrap().epsilon(), 1e-6);
        assert_eq!(AnalysisConfig::default().epsilon(), 1e-9);
    }

    #[test]
    fn single_precision_primitives() {
        let perm = Tpm::<f32>::deterministic(&[1, 0, 2]).unwrap();
        assert_eq!(perm.cp(), 1.0f32);
        assert!(Tpm::<f32>::uniform(3).cp().abs() < 1e-6);
    }
}
