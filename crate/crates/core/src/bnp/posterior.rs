use serde::{Deserialize, Serialize};

use super::{check_assumptions, BnpError, LikelihoodModel, Observation, TraitPrior};
use crate::dist::WeightDistribution;
use crate::levy::WeightMeasure;
use crate::quad::{self, QuadOptions};

/// Which prior ingredient an unnormalized posterior density is built on.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "law", rename_all = "snake_case")]
pub enum PriorFactor {
    /// A fixed atom's weight law `F_fix,k`.
    Distribution(WeightDistribution),
    /// The ordinary weight measure `ν` (for atoms at new locations).
    Weight(WeightMeasure),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Role {
    Fixed,
    New,
}

/// Posterior weight law at one location, `∝ prior(θ)·∏_j h(x_j | θ)`.
///
/// `values[j]` is the value of observation `j` at this location, `None` when
/// the observation has no atom there. For discrete likelihoods a missing
/// value contributes `h(0|θ)`. For continuous likelihoods it contributes
/// `H_ord({0}|θ)` at new locations and nothing at fixed ones.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PosteriorWeight {
    pub location: f64,
    pub role: Role,
    pub prior: PriorFactor,
    pub likelihood: LikelihoodModel,
    pub values: Vec<Option<f64>>,
    pub normalizer: f64,
}

impl PosteriorWeight {
    fn build(
        location: f64,
        role: Role,
        prior: PriorFactor,
        likelihood: LikelihoodModel,
        values: Vec<Option<f64>>,
    ) -> Result<Self, BnpError> {
        let mut w = Self {
            location,
            role,
            prior,
            likelihood,
            values,
            normalizer: f64::NAN,
        };
        let z = w.compute_normalizer()?;
        if z.is_nan() {
            return Err(BnpError::UnmatchedLikelihood(format!(
                "posterior at {location} has an undefined normalizer"
            )));
        }
        if !(z.is_finite() && z > 0.0) {
            return Err(BnpError::UnmatchedLikelihood(format!(
                "posterior at {location} has normalizer {z}"
            )));
        }
        w.normalizer = z;
        Ok(w)
    }

    fn single_factor(&self, value: Option<f64>, theta: f64) -> f64 {
        match (&self.likelihood, self.role) {
            (LikelihoodModel::Discrete(h), _) => h.pmf(value.unwrap_or(0.0) as i64, theta),
            (LikelihoodModel::Continuous(h), Role::Fixed) => {
                value.map_or(1.0, |x| h.h_fix(x, theta))
            }
            (LikelihoodModel::Continuous(h), Role::New) => match value {
                Some(x) => h.h_ord(x, theta),
                None => h.null_mass(theta),
            },
        }
    }

    /// `∏_j h(x_j | θ)`.
    pub fn likelihood_factor(&self, theta: f64) -> f64 {
        self.values
            .iter()
            .map(|v| self.single_factor(*v, theta))
            .product()
    }

    /// Prior density (or point mass) at `θ`.
    pub fn prior_density(&self, theta: f64) -> f64 {
        match &self.prior {
            PriorFactor::Distribution(d) => d.density(theta),
            PriorFactor::Weight(nu) => {
                let atoms: f64 = nu
                    .signed_atoms()
                    .iter()
                    .filter(|(w, _)| *w == theta)
                    .map(|(_, m)| m)
                    .sum();
                atoms + nu.density_at(theta)
            }
        }
    }

    pub fn unnormalized(&self, theta: f64) -> f64 {
        let p = self.prior_density(theta);
        if p == 0.0 {
            0.0
        } else {
            p * self.likelihood_factor(theta)
        }
    }

    /// Normalized density, or probability mass for discrete priors.
    pub fn density(&self, theta: f64) -> f64 {
        self.unnormalized(theta) / self.normalizer
    }

    /// Normalized `(θ, probability)` pairs when the posterior is discrete.
    pub fn discrete_support(&self) -> Option<Vec<(f64, f64)>> {
        let atoms = match &self.prior {
            PriorFactor::Distribution(d) => d.atoms()?,
            PriorFactor::Weight(nu) if !nu.has_density() => nu.signed_atoms(),
            PriorFactor::Weight(_) => return None,
        };
        Some(
            atoms
                .into_iter()
                .map(|(t, p)| (t, p * self.likelihood_factor(t) / self.normalizer))
                .collect(),
        )
    }

    /// Behaviour of `θ ↦ ∏ h(x_j|θ)` at 0 (power order) and at ∞
    /// (power order, or `-∞` for faster than any power).
    fn factor_orders(&self) -> (f64, f64) {
        let mut order0 = 0.0;
        let mut order_inf = 0.0;
        for v in &self.values {
            let (o0, oi) = match (&self.likelihood, self.role, v) {
                (LikelihoodModel::Discrete(h), _, Some(x)) => {
                    let fast = matches!(h, super::DiscreteLikelihood::SignedPoisson { .. });
                    (
                        h.order_at_zero(*x as i64),
                        if fast { f64::NEG_INFINITY } else { 0.0 },
                    )
                }
                (LikelihoodModel::Discrete(_), _, None) => (0.0, f64::NEG_INFINITY),
                (LikelihoodModel::Continuous(h), Role::New, Some(_)) => {
                    (h.null_tilt().complement_order(), f64::NEG_INFINITY)
                }
                (LikelihoodModel::Continuous(_), Role::Fixed, Some(_)) => (0.0, f64::NEG_INFINITY),
                (LikelihoodModel::Continuous(_), _, None) => (0.0, 0.0),
            };
            order0 += o0;
            order_inf += oi;
        }
        (order0, order_inf)
    }

    fn compute_normalizer(&self) -> Result<f64, BnpError> {
        let opts = QuadOptions::default();
        let f = |t: f64| self.unnormalized(t);
        match &self.prior {
            PriorFactor::Distribution(d) => {
                if let Some(atoms) = d.atoms() {
                    return Ok(atoms
                        .iter()
                        .map(|(t, p)| p * self.likelihood_factor(*t))
                        .sum());
                }
                let (lo, hi) = match *d {
                    WeightDistribution::Normal { mean, sd } => (mean - 12.0 * sd, mean + 12.0 * sd),
                    WeightDistribution::Uniform { lo, hi } => (lo, hi),
                    _ => unreachable!("discrete laws handled above"),
                };
                let mut cuts = vec![lo, hi];
                if lo < 0.0 && hi > 0.0 {
                    cuts.insert(1, 0.0);
                }
                let mut total = 0.0;
                for w in cuts.windows(2) {
                    total += quad::integrate_finite(f, w[0], w[1], &opts)?.value;
                }
                if matches!(d, WeightDistribution::Normal { .. }) {
                    total += quad::integrate(f, f64::NEG_INFINITY, lo, &opts)?.value;
                    total += quad::integrate(f, hi, f64::INFINITY, &opts)?.value;
                }
                Ok(total)
            }
            PriorFactor::Weight(nu) => {
                let (order0, order_inf) = self.factor_orders();
                Ok(nu
                    .integrate(|t| self.likelihood_factor(t), order0, order_inf)?
                    .unwrap_or(f64::INFINITY))
            }
        }
    }
}

/// The three parts of the posterior.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PosteriorResult {
    pub observations: usize,
    pub fixed_updates: Vec<PosteriorWeight>,
    pub new_atoms: Vec<PosteriorWeight>,
    /// `ν(dθ)·h(0|θ)^m`, or `ν(dθ)·H_ord({0}|θ)^m`.
    pub ordinary_weight_measure: WeightMeasure,
}

/// 2001 equispaced points on `[-10, 10]` with the point at 0 removed.
pub fn oracle_grid() -> Vec<f64> {
    (0..2001)
        .map(|i| -10.0 + 0.01 * i as f64)
        .filter(|t| t.abs() >= 5e-7)
        .collect()
}

fn update(
    prior: &TraitPrior,
    lik: &LikelihoodModel,
    obs: &[Observation],
    require_a1: bool,
) -> Result<PosteriorResult, BnpError> {
    let report = check_assumptions(prior, lik)?;
    if require_a1 || report.violation() != Some("A1") {
        report.require()?;
    } else if !(report.a2 && report.levy_integrable) {
        report.require()?;
    }
    let integer = matches!(lik, LikelihoodModel::Discrete(_));
    for o in obs {
        o.validate(integer)?;
    }
    let fixed_updates = prior
        .fixed_atoms
        .iter()
        .map(|a| {
            let values = obs.iter().map(|o| o.value_at(a.location)).collect();
            PosteriorWeight::build(
                a.location,
                Role::Fixed,
                PriorFactor::Distribution(a.weight.clone()),
                *lik,
                values,
            )
        })
        .collect::<Result<Vec<_>, _>>()?;
    let mut new_locations: Vec<f64> = obs
        .iter()
        .flat_map(|o| o.atoms.iter().map(|a| a.loc))
        .filter(|loc| !prior.fixed_atoms.iter().any(|a| a.location == *loc))
        .collect();
    new_locations.sort_by(f64::total_cmp);
    new_locations.dedup();
    let new_atoms = new_locations
        .into_iter()
        .map(|loc| {
            let values = obs.iter().map(|o| o.value_at(loc)).collect();
            PosteriorWeight::build(
                loc,
                Role::New,
                PriorFactor::Weight(prior.weight_measure.clone()),
                *lik,
                values,
            )
        })
        .collect::<Result<Vec<_>, _>>()?;
    let ordinary_weight_measure = prior
        .weight_measure
        .clone()
        .tilted(lik.null_tilt(), obs.len() as u32);
    Ok(PosteriorResult {
        observations: obs.len(),
        fixed_updates,
        new_atoms,
        ordinary_weight_measure,
    })
}

/// Posterior for integer-valued observations. With `require_a1 = false` a
/// finite-mass `ν` is accepted; the three-part form is unchanged.
pub fn posterior_update_discrete(
    prior: &TraitPrior,
    lik: &LikelihoodModel,
    obs: &[Observation],
    require_a1: bool,
) -> Result<PosteriorResult, BnpError> {
    if !matches!(lik, LikelihoodModel::Discrete(_)) {
        return Err(BnpError::InvalidParameter(
            "expected a discrete likelihood".into(),
        ));
    }
    update(prior, lik, obs, require_a1)
}

/// Posterior for real-valued observations; `ν` must have a density.
pub fn posterior_update_continuous(
    prior: &TraitPrior,
    lik: &LikelihoodModel,
    obs: &[Observation],
) -> Result<PosteriorResult, BnpError> {
    if !matches!(lik, LikelihoodModel::Continuous(_)) {
        return Err(BnpError::InvalidParameter(
            "expected a continuous likelihood".into(),
        ));
    }
    let nu = &prior.weight_measure;
    if !nu.signed_atoms().is_empty() || !nu.has_density() {
        return Err(BnpError::InvalidParameter(
            "continuous update needs ν(dθ) = g(θ)dθ".into(),
        ));
    }
    update(prior, lik, obs, true)
}
