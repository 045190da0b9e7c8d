//! Floating point scalar abstraction shared by every numeric routine.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive, NumAssign, ToPrimitive};

/// A real scalar usable for transition probabilities and information quantities.
///
/// Implemented for `f32` and `f64`. The associated tolerances are expressed in
/// the scalar's own precision so that `f32` matrices are not rejected for
/// rounding noise a double would never see.
pub trait Scalar:
    Float + FromPrimitive + ToPrimitive + NumAssign + Sum + Send + Sync + Debug + Display + 'static
{
    /// Allowed deviation of an input row sum from one.
    fn row_sum_tolerance() -> Self;
    /// Tolerance for internal equality checks.
    fn equality_tolerance() -> Self;
    /// Probabilities at or below this value count as exact zeros in entropy terms.
    fn zero_probability() -> Self;

    fn from_usize_lossy(n: usize) -> Self {
        Self::from_usize(n).expect("usize is representable as a float")
    }

    fn from_f64_lossy(x: f64) -> Self {
        Self::from_f64(x).expect("f64 is representable")
    }
}

impl Scalar for f64 {
    fn row_sum_tolerance() -> Self {
        1e-9
    }
    fn equality_tolerance() -> Self {
        1e-12
    }
    fn zero_probability() -> Self {
        1e-15
    }
}

impl Scalar for f32 {
    fn row_sum_tolerance() -> Self {
        1e-5
    }
    fn equality_tolerance() -> Self {
        1e-6
    }
    fn zero_probability() -> Self {
        1e-15
    }
}

/// `x * log2(x)` with the `0 log 0 = 0` convention.
#[inline]
pub fn xlog2x<T: Scalar>(x: T) -> T {
    if x <= T::zero_probability() {
        T::zero()
    } else {
        x * x.log2()
    }
}

/// Shannon entropy in bits of a (not necessarily normalized) weight vector's entries.
///
/// The caller is responsible for normalization; this sums `-p log2 p` term by term.
pub fn entropy_bits<T: Scalar>(probs: impl IntoIterator<Item = T>) -> T {
    let mut h = T::zero();
    for p in probs {
        h -= xlog2x(p);
    }
    // -0.0 and tiny negative noise from cancellation
    if h < T::zero() {
        T::zero()
    } else {
        h
    }
}
