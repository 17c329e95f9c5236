//! Scalar types usable for exact measure arithmetic.

use std::fmt::Debug;

use num_rational::BigRational;
use num_traits::{FromPrimitive, Num, Signed, ToPrimitive};

/// A signed, ordered field element that the measure core can compute with.
///
/// Implemented for `f32`, `f64` and [`BigRational`]. The rational type makes
/// evaluation, decomposition and linear combination exact, which is what the
/// algebraic identities in the tests are checked against.
pub trait Scalar:
    Clone + Debug + PartialOrd + Num + Signed + FromPrimitive + ToPrimitive + Send + Sync + 'static
{
    /// False for NaN and infinities.
    fn is_finite_value(&self) -> bool;

    fn max_of(a: Self, b: Self) -> Self {
        if a >= b {
            a
        } else {
            b
        }
    }

    fn min_of(a: Self, b: Self) -> Self {
        if a <= b {
            a
        } else {
            b
        }
    }
}

impl Scalar for f32 {
    fn is_finite_value(&self) -> bool {
        self.is_finite()
    }
}

impl Scalar for f64 {
    fn is_finite_value(&self) -> bool {
        self.is_finite()
    }
}

impl Scalar for BigRational {
    fn is_finite_value(&self) -> bool {
        true
    }
}

/// Builds a rational from a float without rounding (every finite `f64` is a dyadic rational).
pub fn exact_rational(x: f64) -> Option<BigRational> {
    BigRational::from_float(x)
}
