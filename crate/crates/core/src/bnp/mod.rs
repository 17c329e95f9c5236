//! Conjugate posterior updates for priors built from CRSMs.
//!
//! The prior is `Θ = Σ θ_k δ_{ψ_k}` with finitely many fixed atoms and an
//! ordinary part whose Lévy measure is `ν(dθ)·G(dψ)`. Observations are atomic
//! measures `X_j = Σ x_{j,k} δ_{ψ_k}` drawn independently given `Θ`.

mod likelihood;
mod mean;
mod posterior;

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dist::{BaseDistribution, WeightDistribution};
use crate::levy::{
    check_levy_integrability, weight_activity, DensityFamily, LevyError, LevySpec, Sides,
    WeightMeasure,
};
use crate::measure::{Atom, SignedMeasure};
use crate::quad::QuadError;
use crate::sample::{Draw, FixedAtom, SampleError};

pub use likelihood::{ContinuousLikelihood, DiscreteLikelihood, LikelihoodModel};
pub use mean::eval_mean_function;
pub use posterior::{
    oracle_grid, posterior_update_continuous, posterior_update_discrete, PosteriorResult,
    PosteriorWeight, PriorFactor, Role,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BnpError {
    #[error("AssumptionViolated: {assumption} ({detail})")]
    AssumptionViolated { assumption: String, detail: String },
    #[error("UnmatchedLikelihood: {0}")]
    UnmatchedLikelihood(String),
    #[error("InvalidAlpha: α = {0} must lie in (0, 1)")]
    InvalidAlpha(f64),
    #[error("InvalidParameter: {0}")]
    InvalidParameter(String),
    #[error(transparent)]
    Levy(#[from] LevyError),
    #[error(transparent)]
    Sample(#[from] SampleError),
}

impl From<QuadError> for BnpError {
    fn from(e: QuadError) -> Self {
        BnpError::Levy(LevyError::Quadrature(e))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraitPrior {
    #[serde(default)]
    pub fixed_atoms: Vec<FixedAtom>,
    pub weight_measure: WeightMeasure,
    pub base: BaseDistribution,
}

impl TraitPrior {
    pub fn validate(&self) -> Result<(), BnpError> {
        self.weight_measure.validate()?;
        self.base.validate().map_err(BnpError::InvalidParameter)?;
        for (i, a) in self.fixed_atoms.iter().enumerate() {
            a.weight.validate().map_err(BnpError::InvalidParameter)?;
            if self.fixed_atoms[..i]
                .iter()
                .any(|b| b.location == a.location)
            {
                return Err(BnpError::InvalidParameter(format!(
                    "two fixed atoms at {}",
                    a.location
                )));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ObservedAtom {
    pub loc: f64,
    pub x: f64,
}

/// One atomic observation `X_j`.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Observation {
    pub atoms: Vec<ObservedAtom>,
}

impl Observation {
    pub fn new(atoms: Vec<(f64, f64)>) -> Self {
        Self {
            atoms: atoms
                .into_iter()
                .map(|(loc, x)| ObservedAtom { loc, x })
                .collect(),
        }
    }

    pub fn value_at(&self, loc: f64) -> Option<f64> {
        self.atoms.iter().find(|a| a.loc == loc).map(|a| a.x)
    }

    fn validate(&self, integer: bool) -> Result<(), BnpError> {
        for (i, a) in self.atoms.iter().enumerate() {
            if !(a.loc.is_finite() && a.x.is_finite()) || a.x == 0.0 {
                return Err(BnpError::InvalidParameter(format!(
                    "observed atom ({}, {}) needs finite location and nonzero value",
                    a.loc, a.x
                )));
            }
            if integer && a.x.fract() != 0.0 {
                return Err(BnpError::InvalidParameter(format!(
                    "discrete likelihood needs integer values, got {}",
                    a.x
                )));
            }
            if self.atoms[..i].iter().any(|b| b.loc == a.loc) {
                return Err(BnpError::InvalidParameter(format!(
                    "observation has two atoms at {}",
                    a.loc
                )));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AssumptionReport {
    /// Finitely many fixed atoms.
    pub a0: bool,
    /// `ν(ℝ∖{0}) = ∞`.
    pub a1: bool,
    pub nu_mass: f64,
    /// `A2` for discrete likelihoods, `A2'` for continuous ones.
    pub a2_label: String,
    pub a2: bool,
    /// `∫ (1 − h(0|θ)) ν(dθ)`, equal to `Σ_{x≠0} ∫ h(x|θ) ν(dθ)`.
    pub a2_value: f64,
    /// `∫ 1∧|θ| ν(dθ) < ∞`.
    pub levy_integrable: bool,
}

impl AssumptionReport {
    /// First failing assumption, by name.
    pub fn violation(&self) -> Option<&str> {
        if !self.a0 {
            Some("A0")
        } else if !self.a1 {
            Some("A1")
        } else if !self.a2 {
            Some(&self.a2_label)
        } else if !self.levy_integrable {
            Some("Levy integrability")
        } else {
            None
        }
    }

    pub(crate) fn require(&self) -> Result<(), BnpError> {
        match self.violation() {
            None => Ok(()),
            Some(name) => Err(BnpError::AssumptionViolated {
                assumption: name.to_string(),
                detail: format!(
                    "ν mass {}, {} integral {}",
                    self.nu_mass, self.a2_label, self.a2_value
                ),
            }),
        }
    }
}

pub fn check_assumptions(
    prior: &TraitPrior,
    lik: &LikelihoodModel,
) -> Result<AssumptionReport, BnpError> {
    prior.validate()?;
    lik.validate().map_err(BnpError::InvalidParameter)?;
    let nu = &prior.weight_measure;
    let activity = weight_activity(nu)?;
    let tilt = lik.null_tilt();
    let order_inf = if tilt.complement_decays_fast() {
        f64::NEG_INFINITY
    } else {
        0.0
    };
    let a2_value = nu
        .integrate(|t| tilt.complement(t), tilt.complement_order(), order_inf)?
        .unwrap_or(f64::INFINITY);
    let unit = LevySpec {
        weight: nu.clone(),
        base_rate: 1.0,
        horizon: 1.0,
    };
    Ok(AssumptionReport {
        a0: true,
        a1: !activity.finite,
        nu_mass: activity.mass,
        a2_label: match lik {
            LikelihoodModel::Discrete(_) => "A2".into(),
            LikelihoodModel::Continuous(_) => "A2'".into(),
        },
        a2: a2_value.is_finite(),
        a2_value,
        levy_integrable: check_levy_integrability(&unit)?.ok,
    })
}

/// The Gaussian worked example: `ν(dθ) = |θ|^{α−2}dθ`, `G` uniform on `[0, 1)`,
/// fixed atoms `(ψ, μ_fix, σ_fix)` with Normal weights, and the
/// [`ContinuousLikelihood::GaussianNull`] observation model.
pub fn gaussian_example_prior(
    alpha: f64,
    sigma: f64,
    fixed: &[(f64, f64, f64)],
) -> Result<(TraitPrior, LikelihoodModel), BnpError> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(BnpError::InvalidAlpha(alpha));
    }
    let weight_measure = WeightMeasure::density_on(
        DensityFamily::PowerLaw {
            alpha,
            coef: 1.0,
            cutoff: None,
        },
        Sides::Both,
    )?;
    let prior = TraitPrior {
        fixed_atoms: fixed
            .iter()
            .map(|&(location, mean, sd)| FixedAtom {
                location,
                weight: WeightDistribution::Normal { mean, sd },
            })
            .collect(),
        weight_measure,
        base: BaseDistribution::uniform(1.0),
    };
    prior.validate()?;
    let lik = LikelihoodModel::Continuous(ContinuousLikelihood::GaussianNull { alpha, sigma });
    lik.validate().map_err(BnpError::InvalidParameter)?;
    Ok((prior, lik))
}

/// One draw of `Θ`: fixed atoms from their weight laws, ordinary atoms from
/// the Poisson process with intensity `ν ⊗ G` (jumps below `eps` dropped).
pub fn sample_prior_draw<R: Rng + ?Sized>(
    prior: &TraitPrior,
    eps: f64,
    rng: &mut R,
) -> Result<Draw, BnpError> {
    prior.validate()?;
    let (pos, neg) = crate::sample::plan_weight(&prior.weight_measure, eps)?;
    let mut atoms = Vec::new();
    for fixed in &prior.fixed_atoms {
        let w = fixed.weight.sample(rng);
        if w != 0.0 {
            atoms.push(Atom::new(fixed.location, w));
        }
    }
    let mut sizes = Vec::new();
    pos.sample(1.0, rng, &mut sizes);
    let n_pos = sizes.len();
    neg.sample(1.0, rng, &mut sizes);
    for (i, w) in sizes.into_iter().enumerate() {
        let signed = if i < n_pos { w } else { -w };
        atoms.push(Atom::new(prior.base.sample(rng), signed));
    }
    Ok(Draw {
        measure: SignedMeasure::from_atoms(atoms).map_err(SampleError::from)?,
        remainder: pos.remainder + neg.remainder,
    })
}
