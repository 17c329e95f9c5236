use serde::{Deserialize, Serialize};
use statrs::function::factorial::ln_factorial;

use crate::dist::normal_pdf;
use crate::levy::Tilt;
use crate::quad::{self, QuadOptions};

/// Integer-valued observation laws `h(x | θ)` with `h(0 | θ) → 1` as `θ → 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum DiscreteLikelihood {
    /// `x = sign(θ)·N`, `N ~ Poisson(rate·|θ|)`.
    SignedPoisson { rate: f64 },
    /// `x = sign(θ)` with probability `1 − e^{-rate|θ|}`, else 0.
    SignedBernoulli { rate: f64 },
}

impl DiscreteLikelihood {
    pub fn pmf(&self, x: i64, theta: f64) -> f64 {
        let (rate, a) = match *self {
            DiscreteLikelihood::SignedPoisson { rate }
            | DiscreteLikelihood::SignedBernoulli { rate } => (rate, theta.abs()),
        };
        if x == 0 {
            return (-rate * a).exp();
        }
        if theta == 0.0 || (x > 0) != (theta > 0.0) {
            return 0.0;
        }
        match *self {
            DiscreteLikelihood::SignedPoisson { .. } => {
                let n = x.unsigned_abs();
                (n as f64 * (rate * a).ln() - rate * a - ln_factorial(n)).exp()
            }
            DiscreteLikelihood::SignedBernoulli { .. } => {
                if x.abs() == 1 {
                    -(-rate * a).exp_m1()
                } else {
                    0.0
                }
            }
        }
    }

    /// `h(0 | θ)` as a thinning factor.
    pub fn null_tilt(&self) -> Tilt {
        match *self {
            DiscreteLikelihood::SignedPoisson { rate }
            | DiscreteLikelihood::SignedBernoulli { rate } => Tilt::ExpAbs { rate },
        }
    }

    /// Order of `h(x | θ)` as `θ → 0` for fixed `x ≠ 0`.
    pub fn order_at_zero(&self, x: i64) -> f64 {
        match *self {
            DiscreteLikelihood::SignedPoisson { .. } => x.unsigned_abs() as f64,
            DiscreteLikelihood::SignedBernoulli { .. } => 1.0,
        }
    }

    fn validate(&self) -> Result<(), String> {
        match *self {
            DiscreteLikelihood::SignedPoisson { rate }
            | DiscreteLikelihood::SignedBernoulli { rate }
                if rate > 0.0 && rate.is_finite() =>
            {
                Ok(())
            }
            _ => Err(format!("invalid likelihood {self:?}")),
        }
    }
}

/// Real-valued observation laws with separate fixed-atom density `h_fix`,
/// ordinary density `h_ord` on `ℝ∖{0}` and point mass `H_ord({0} | θ)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum ContinuousLikelihood {
    /// `h_fix = N(θ, σ²)`, `H_ord({0}|θ) = 1 − |θ|^{2−α}e^{−θ²}`,
    /// `h_ord = |θ|^{2−α}e^{−θ²}·N(θ, σ²)`.
    GaussianNull { alpha: f64, sigma: f64 },
}

impl ContinuousLikelihood {
    pub fn h_fix(&self, x: f64, theta: f64) -> f64 {
        match *self {
            ContinuousLikelihood::GaussianNull { sigma, .. } => normal_pdf(x, theta, sigma),
        }
    }

    pub fn h_ord(&self, x: f64, theta: f64) -> f64 {
        match *self {
            ContinuousLikelihood::GaussianNull { sigma, .. } => {
                self.null_tilt().complement(theta) * normal_pdf(x, theta, sigma)
            }
        }
    }

    /// `H_ord({0} | θ)`.
    pub fn null_mass(&self, theta: f64) -> f64 {
        self.null_tilt().value(theta)
    }

    pub fn null_tilt(&self) -> Tilt {
        match *self {
            ContinuousLikelihood::GaussianNull { alpha, .. } => Tilt::GaussianNull { alpha },
        }
    }

    fn validate(&self) -> Result<(), String> {
        match *self {
            ContinuousLikelihood::GaussianNull { alpha, sigma }
                if alpha > 0.0 && alpha < 2.0 && sigma > 0.0 && sigma.is_finite() =>
            {
                Ok(())
            }
            _ => Err(format!("invalid likelihood {self:?}")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "model", rename_all = "snake_case")]
pub enum LikelihoodModel {
    Discrete(DiscreteLikelihood),
    Continuous(ContinuousLikelihood),
}

impl LikelihoodModel {
    pub fn validate(&self) -> Result<(), String> {
        match self {
            LikelihoodModel::Discrete(d) => d.validate(),
            LikelihoodModel::Continuous(c) => c.validate(),
        }
    }

    /// The factor `h(0|θ)` or `H_ord({0}|θ)` thinning ordinary atoms.
    pub fn null_tilt(&self) -> Tilt {
        match self {
            LikelihoodModel::Discrete(d) => d.null_tilt(),
            LikelihoodModel::Continuous(c) => c.null_tilt(),
        }
    }

    /// Largest deviation from 1 of the total probability over a θ-grid.
    pub fn normalization_error(&self, thetas: &[f64]) -> f64 {
        thetas
            .iter()
            .map(|&theta| {
                let total = match self {
                    LikelihoodModel::Discrete(d) => {
                        let mut s = d.pmf(0, theta);
                        let sign = if theta >= 0.0 { 1 } else { -1 };
                        for n in 1..2000 {
                            let p = d.pmf(sign * n, theta);
                            s += p;
                            if p < 1e-18 && n as f64 > theta.abs() * 10.0 {
                                break;
                            }
                        }
                        s
                    }
                    LikelihoodModel::Continuous(c) => {
                        let opts = QuadOptions::default();
                        let ord = quad::integrate(
                            |x| c.h_ord(x, theta),
                            f64::NEG_INFINITY,
                            f64::INFINITY,
                            &opts,
                        )
                        .map(|q| q.value)
                        .unwrap_or(f64::NAN);
                        let fix = quad::integrate(
                            |x| c.h_fix(x, theta),
                            f64::NEG_INFINITY,
                            f64::INFINITY,
                            &opts,
                        )
                        .map(|q| q.value)
                        .unwrap_or(f64::NAN);
                        return (c.null_mass(theta) + ord - 1.0)
                            .abs()
                            .max((fix - 1.0).abs());
                    }
                };
                (total - 1.0).abs()
            })
            .fold(0.0, f64::max)
    }
}
