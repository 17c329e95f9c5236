//! Samplers for Poisson processes, CRMs, CRSMs, Skellam processes and
//! Gaussian random measures.

mod crsm;
mod grm;
pub(crate) mod jumps;
mod poisson;
mod skellam;

use thiserror::Error;

use crate::levy::LevyError;
use crate::measure::MeasureError;

pub(crate) use crsm::plan_weight;
pub use crsm::{sample_crm, sample_crsm, CrsmSampler, Draw, FixedAtom, DEFAULT_EPS};
pub use grm::{check_grm_kernel, grm_to_measure, sample_grm, GrmCheck, GrmKernelSpec, GrmSampler};
pub use poisson::{sample_poisson_count, sample_poisson_pp};
pub use skellam::{sample_skellam_pp, sample_skellam_pp_on, skellam_pmf};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SampleError {
    #[error(transparent)]
    Levy(#[from] LevyError),
    #[error(transparent)]
    Measure(#[from] MeasureError),
    #[error(
        "TruncationTooCoarse: remainder bound {remainder:e} exceeds 10% of E|ξ|(S) = {mean:e}"
    )]
    TruncationTooCoarse { remainder: f64, mean: f64 },
    #[error("NotPSD: {0}")]
    NotPsd(String),
    #[error("InvalidParameter: {0}")]
    InvalidParameter(String),
}
