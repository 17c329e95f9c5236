//! Lévy intensity measures `F(ds, dw) = base_rate·ds·ρ(dw)` on `[0, T) × (ℝ∖{0})`
//! and characteristic pairs `(F, α)`.

pub(crate) mod half;
mod weight;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::measure::{BorelSet, StepDensity};
use crate::quad::QuadError;

pub use weight::{Density, DensityFamily, Sides, Tilt, WeightMeasure};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LevyError {
    #[error(transparent)]
    Quadrature(#[from] QuadError),
    #[error("SupportViolation: {0}")]
    SupportViolation(String),
    #[error("InvalidParameter: {0}")]
    InvalidParameter(String),
    #[error("NotIntegrable: ∫ 1∧|w| ρ(dw) diverges")]
    NotIntegrable,
}

fn default_horizon() -> f64 {
    1.0
}

/// Homogeneous product-form Lévy measure on `[0, horizon)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevySpec {
    pub weight: WeightMeasure,
    pub base_rate: f64,
    #[serde(default = "default_horizon")]
    pub horizon: f64,
}

/// A Lévy measure together with a deterministic signed drift density.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CharacteristicPair {
    pub levy: LevySpec,
    #[serde(default)]
    pub drift: StepDensity<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Integrability {
    pub ok: bool,
    pub value: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Activity {
    pub finite: bool,
    pub mass: f64,
}

impl LevySpec {
    pub fn new(weight: WeightMeasure, base_rate: f64) -> Result<Self, LevyError> {
        Self::with_horizon(weight, base_rate, 1.0)
    }

    pub fn with_horizon(
        weight: WeightMeasure,
        base_rate: f64,
        horizon: f64,
    ) -> Result<Self, LevyError> {
        let spec = Self {
            weight,
            base_rate,
            horizon,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<(), LevyError> {
        if !(self.base_rate.is_finite() && self.base_rate > 0.0) {
            return Err(LevyError::InvalidParameter(format!(
                "base_rate must be positive, got {}",
                self.base_rate
            )));
        }
        if !(self.horizon.is_finite() && self.horizon > 0.0) {
            return Err(LevyError::InvalidParameter(format!(
                "horizon must be positive, got {}",
                self.horizon
            )));
        }
        self.weight.validate()
    }

    /// Intensity per unit length: `base_rate·ρ`.
    pub fn rate_scale(&self) -> f64 {
        self.base_rate
    }

    /// `∫ w ρ(dw)`, or `None` when `∫ |w| ρ(dw) = ∞`.
    pub fn mean_jump(&self) -> Result<Option<f64>, LevyError> {
        let abs = self.weight.integrate(|w| w.abs(), 1.0, 1.0)?;
        if abs.is_none() {
            return Ok(None);
        }
        self.weight.integrate(|w| w, 1.0, 1.0)
    }

    /// `E[ξ(B)]` for the jump part, `base_rate·|B ∩ [0,T)|·∫ w ρ(dw)`.
    pub fn mean(&self, set: &BorelSet<f64>) -> Result<Option<f64>, LevyError> {
        Ok(self
            .mean_jump()?
            .map(|m| self.base_rate * self.clipped_length(set) * m))
    }

    pub(crate) fn clipped_length(&self, set: &BorelSet<f64>) -> f64 {
        let window = BorelSet::interval(0.0, self.horizon).expect("positive horizon");
        set.intersection(&window).length()
    }
}

impl CharacteristicPair {
    pub fn new(levy: LevySpec, drift: StepDensity<f64>) -> Self {
        Self { levy, drift }
    }

    pub fn without_drift(levy: LevySpec) -> Self {
        Self {
            levy,
            drift: StepDensity::zero(),
        }
    }
}

/// `base_rate·T·∫ 1∧|w| ρ(dw)`; `ok` is false when the integral diverges.
pub fn check_levy_integrability(spec: &LevySpec) -> Result<Integrability, LevyError> {
    let integral = spec.weight.integrate(|w| w.abs().min(1.0), 1.0, 0.0)?;
    Ok(match integral {
        Some(v) if v.is_finite() => Integrability {
            ok: true,
            value: spec.base_rate * spec.horizon * v,
        },
        _ => Integrability {
            ok: false,
            value: f64::INFINITY,
        },
    })
}

/// Total mass `ρ(ℝ∖{0})` and whether it is finite.
pub fn activity(spec: &LevySpec) -> Result<Activity, LevyError> {
    weight_activity(&spec.weight)
}

pub fn weight_activity(weight: &WeightMeasure) -> Result<Activity, LevyError> {
    let (pos, neg) = (weight.positive_half(), weight.negative_half());
    if !(pos.finite_activity() && neg.finite_activity()) {
        return Ok(Activity {
            finite: false,
            mass: f64::INFINITY,
        });
    }
    let mass = weight.integrate(|_| 1.0, 0.0, 0.0)?;
    Ok(match mass {
        Some(m) => Activity {
            finite: true,
            mass: m,
        },
        None => Activity {
            finite: false,
            mass: f64::INFINITY,
        },
    })
}

/// Places `f1` on the positive half-line and `f2`, reflected, on the negative one.
pub fn compose_two_sided(
    f1: &WeightMeasure,
    f2: &WeightMeasure,
) -> Result<WeightMeasure, LevyError> {
    for (name, part) in [("first", f1), ("second", f2)] {
        part.validate()?;
        if !part.is_positive() {
            return Err(LevyError::SupportViolation(format!(
                "{name} component charges (-∞, 0)"
            )));
        }
    }
    if let (
        WeightMeasure::FiniteDiscrete { atoms: a },
        WeightMeasure::FiniteDiscrete { atoms: b },
    ) = (f1, f2)
    {
        let mut atoms = a.clone();
        atoms.extend(b.iter().map(|(w, m)| (-w, *m)));
        return WeightMeasure::discrete(atoms);
    }
    if f2.negative_half().is_empty() && f2.positive_half().is_empty() {
        return Ok(f1.clone());
    }
    Ok(WeightMeasure::TwoSidedComposite {
        pos: Box::new(f1.clone()),
        neg: Box::new(f2.clone()),
    })
}

/// `∫ (e^{itw} − 1) ρ(dw)`.
pub fn levy_exponent(weight: &WeightMeasure, t: f64) -> Result<Complex64, LevyError> {
    let pos = weight.positive_half().char_integral(t)?;
    let neg = weight.negative_half().char_integral(-t)?;
    pos.zip(neg)
        .map(|(p, n)| p + n)
        .ok_or(LevyError::NotIntegrable)
}

/// `E[e^{itξ(B)}] = exp(itα(B) + base_rate·|B|·∫(e^{itw} − 1)ρ(dw))` for a CRSM without fixed atoms.
pub fn char_fn(
    pair: &CharacteristicPair,
    t: f64,
    set: &BorelSet<f64>,
) -> Result<Complex64, LevyError> {
    if t == 0.0 {
        return Ok(Complex64::new(1.0, 0.0));
    }
    let spec = &pair.levy;
    let len = spec.clipped_length(set);
    let drift = pair.drift.integral(set);
    let psi = if len == 0.0 {
        Complex64::new(0.0, 0.0)
    } else {
        levy_exponent(&spec.weight, t)? * (spec.base_rate * len)
    };
    Ok((Complex64::new(0.0, t * drift) + psi).exp())
}
