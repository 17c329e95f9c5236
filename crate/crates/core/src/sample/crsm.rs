use rand::Rng;
use serde::{Deserialize, Serialize};

use super::jumps::HalfPlan;
use super::SampleError;
use crate::dist::WeightDistribution;
use crate::levy::{
    check_levy_integrability, CharacteristicPair, LevyError, LevySpec, WeightMeasure,
};
use crate::measure::{Atom, SignedMeasure};

pub const DEFAULT_EPS: f64 = 1e-6;

/// A fixed location whose weight is drawn independently of everything else.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FixedAtom {
    pub location: f64,
    pub weight: WeightDistribution,
}

/// A sampled measure with the mass bound of the discarded jumps below `eps`.
#[derive(Debug, Clone, PartialEq)]
pub struct Draw {
    pub measure: SignedMeasure<f64>,
    pub remainder: f64,
}

/// Reusable sampler for a CRSM with characteristic pair `(F, α)` and fixed atoms.
#[derive(Debug, Clone)]
pub struct CrsmSampler {
    pair: CharacteristicPair,
    fixed: Vec<FixedAtom>,
    pos: HalfPlan,
    neg: HalfPlan,
    remainder: f64,
}

/// `(positive, negative)` plans for a weight measure, checking integrability
/// and the 10% truncation budget against `∫ |w| ρ(dw)`.
pub(crate) fn plan_weight(
    weight: &WeightMeasure,
    eps: f64,
) -> Result<(HalfPlan, HalfPlan), SampleError> {
    weight.validate()?;
    let unit = LevySpec {
        weight: weight.clone(),
        base_rate: 1.0,
        horizon: 1.0,
    };
    if !check_levy_integrability(&unit)?.ok {
        return Err(LevyError::NotIntegrable.into());
    }
    let pos = HalfPlan::new(&weight.positive_half(), eps)?;
    let neg = HalfPlan::new(&weight.negative_half(), eps)?;
    let remainder = pos.remainder + neg.remainder;
    if remainder > 0.0 {
        if let Some(abs_mean) = weight.integrate(|w| w.abs(), 1.0, 1.0)? {
            if remainder > 0.1 * abs_mean {
                return Err(SampleError::TruncationTooCoarse {
                    remainder,
                    mean: abs_mean,
                });
            }
        }
    }
    Ok((pos, neg))
}

impl CrsmSampler {
    pub fn new(
        pair: CharacteristicPair,
        fixed: Vec<FixedAtom>,
        eps: f64,
    ) -> Result<Self, SampleError> {
        pair.levy.validate()?;
        let horizon = pair.levy.horizon;
        for atom in &fixed {
            atom.weight
                .validate()
                .map_err(SampleError::InvalidParameter)?;
            if !(atom.location >= 0.0 && atom.location < horizon) {
                return Err(SampleError::InvalidParameter(format!(
                    "fixed atom location {} outside [0, {horizon})",
                    atom.location
                )));
            }
        }
        let (pos, neg) = plan_weight(&pair.levy.weight, eps)?;
        let remainder = (pos.remainder + neg.remainder) * pair.levy.base_rate * horizon;
        Ok(Self {
            pair,
            fixed,
            pos,
            neg,
            remainder,
        })
    }

    /// `base_rate·T·∫_{|w|<eps} |w| ρ(dw)`.
    pub fn remainder(&self) -> f64 {
        self.remainder
    }

    pub fn pair(&self) -> &CharacteristicPair {
        &self.pair
    }

    /// Jump atoms only, with uniform locations on `[0, T)`.
    pub(crate) fn sample_jumps<R: Rng + ?Sized>(&self, rng: &mut R, atoms: &mut Vec<Atom<f64>>) {
        let horizon = self.pair.levy.horizon;
        let scale = self.pair.levy.base_rate * horizon;
        let mut sizes = Vec::new();
        self.pos.sample(scale, rng, &mut sizes);
        let n_pos = sizes.len();
        self.neg.sample(scale, rng, &mut sizes);
        for (i, w) in sizes.into_iter().enumerate() {
            let signed = if i < n_pos { w } else { -w };
            atoms.push(Atom::new(rng.random::<f64>() * horizon, signed));
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Draw {
        let mut atoms = Vec::new();
        for fixed in &self.fixed {
            let w = fixed.weight.sample(rng);
            if w != 0.0 {
                atoms.push(Atom::new(fixed.location, w));
            }
        }
        self.sample_jumps(rng, &mut atoms);
        let measure =
            SignedMeasure::new(atoms, self.pair.drift.clone()).expect("sampled atoms are finite");
        Draw {
            measure,
            remainder: self.remainder,
        }
    }
}

/// One draw of a CRM; the weight measure must charge `(0, ∞)` only.
pub fn sample_crm<R: Rng + ?Sized>(
    spec: &LevySpec,
    eps: f64,
    rng: &mut R,
) -> Result<Draw, SampleError> {
    if !spec.weight.is_positive() {
        return Err(
            LevyError::SupportViolation("CRM weight measure charges (-∞, 0)".into()).into(),
        );
    }
    Ok(CrsmSampler::new(
        CharacteristicPair::without_drift(spec.clone()),
        Vec::new(),
        eps,
    )?
    .sample(rng))
}

/// One draw of a CRSM: fixed atoms, drift, and the difference of two independent CRMs.
pub fn sample_crsm<R: Rng + ?Sized>(
    pair: &CharacteristicPair,
    fixed_atoms: &[FixedAtom],
    eps: f64,
    rng: &mut R,
) -> Result<Draw, SampleError> {
    Ok(CrsmSampler::new(pair.clone(), fixed_atoms.to_vec(), eps)?.sample(rng))
}
