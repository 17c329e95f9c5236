//! Random signed measures on a bounded interval.

pub mod bnp;
pub mod dist;
pub mod graph;
pub mod levy;
pub mod measure;
pub mod quad;
pub mod rng;
pub mod sample;
mod scalar;
pub mod stats;

pub use scalar::{exact_rational, Scalar};

pub type Interval = measure::Interval<f64>;
pub type BorelSet = measure::BorelSet<f64>;
pub type StepDensity = measure::StepDensity<f64>;
pub type SignedMeasure = measure::SignedMeasure<f64>;
pub type MarkedPointPattern = measure::MarkedPointPattern<f64>;
pub type Atom = measure::Atom<f64>;
