//! Finitely supported signed measures on a bounded interval `[0, T)`.
//!
//! A [`SignedMeasure`] is a finite list of weighted atoms plus a
//! piecewise-constant signed density. Everything here is generic over
//! [`Scalar`](crate::Scalar), so the same code evaluates in `f64` or in exact
//! rationals.

mod density;
mod set;
mod signed;

use thiserror::Error;

pub use density::StepDensity;
pub use set::{BorelSet, Interval};
pub use signed::{Atom, MarkedPointPattern, SignedMeasure};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MeasureError {
    #[error("InvalidInterval: {0} is not a finite half-open interval")]
    InvalidInterval(String),
    #[error("InvalidDensity: {0}")]
    InvalidDensity(String),
    #[error("NonFinite: atom location or weight is not finite")]
    NonFinite,
    #[error("NonAtomicInput: measure has a nonzero diffuse component")]
    NonAtomicInput,
    #[error("DuplicateLocation: two points share location {0}")]
    DuplicateLocation(String),
    #[error("ZeroMark: marked point with mark 0")]
    ZeroMark,
}
