//! One-dimensional distributions for fixed-atom weights and atom locations.

use rand::Rng;
use rand_distr::{Beta as BetaSampler, Distribution, Normal as NormalSampler};
use serde::{Deserialize, Serialize};
use statrs::distribution::{Beta, ContinuousCDF};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum WeightDistribution {
    Degenerate {
        value: f64,
    },
    /// `sd = 0` is the point mass at `mean`.
    Normal {
        mean: f64,
        sd: f64,
    },
    Uniform {
        lo: f64,
        hi: f64,
    },
    /// Finite support, `(value, probability)` pairs.
    Discrete {
        support: Vec<(f64, f64)>,
    },
}

impl WeightDistribution {
    pub fn validate(&self) -> Result<(), String> {
        let ok = match self {
            WeightDistribution::Degenerate { value } => value.is_finite(),
            WeightDistribution::Normal { mean, sd } => {
                mean.is_finite() && sd.is_finite() && *sd >= 0.0
            }
            WeightDistribution::Uniform { lo, hi } => lo.is_finite() && hi.is_finite() && lo < hi,
            WeightDistribution::Discrete { support } => {
                !support.is_empty()
                    && support.iter().all(|(v, p)| v.is_finite() && *p >= 0.0)
                    && (support.iter().map(|(_, p)| p).sum::<f64>() - 1.0).abs() < 1e-9
            }
        };
        if ok {
            Ok(())
        } else {
            Err(format!("invalid weight distribution {self:?}"))
        }
    }

    /// Point masses of a discrete law, or `None` for a continuous one.
    pub fn atoms(&self) -> Option<Vec<(f64, f64)>> {
        match self {
            WeightDistribution::Degenerate { value } => Some(vec![(*value, 1.0)]),
            WeightDistribution::Normal { mean, sd } if *sd == 0.0 => Some(vec![(*mean, 1.0)]),
            WeightDistribution::Discrete { support } => Some(support.clone()),
            _ => None,
        }
    }

    /// Density for continuous laws, probability mass for discrete ones.
    pub fn density(&self, x: f64) -> f64 {
        match self {
            WeightDistribution::Normal { mean, sd } if *sd > 0.0 => normal_pdf(x, *mean, *sd),
            WeightDistribution::Uniform { lo, hi } => {
                if x >= *lo && x < *hi {
                    1.0 / (hi - lo)
                } else {
                    0.0
                }
            }
            _ => self
                .atoms()
                .unwrap()
                .iter()
                .filter(|(v, _)| *v == x)
                .map(|(_, p)| p)
                .sum(),
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match self {
            WeightDistribution::Degenerate { value } => *value,
            WeightDistribution::Normal { mean, sd } => {
                if *sd == 0.0 {
                    *mean
                } else {
                    NormalSampler::new(*mean, *sd).unwrap().sample(rng)
                }
            }
            WeightDistribution::Uniform { lo, hi } => rng.random_range(*lo..*hi),
            WeightDistribution::Discrete { support } => {
                let u: f64 = rng.random();
                let mut acc = 0.0;
                for (v, p) in support {
                    acc += p;
                    if u < acc {
                        return *v;
                    }
                }
                support.last().unwrap().0
            }
        }
    }
}

pub fn normal_pdf(x: f64, mean: f64, sd: f64) -> f64 {
    let z = (x - mean) / sd;
    (-0.5 * z * z).exp() / (sd * (2.0 * std::f64::consts::PI).sqrt())
}

/// Atomless location law `G` on a bounded interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum BaseDistribution {
    Uniform {
        lo: f64,
        hi: f64,
    },
    /// `lo + (hi − lo)·Beta(a, b)`.
    Beta {
        a: f64,
        b: f64,
        lo: f64,
        hi: f64,
    },
}

impl BaseDistribution {
    pub fn uniform(horizon: f64) -> Self {
        BaseDistribution::Uniform {
            lo: 0.0,
            hi: horizon,
        }
    }

    pub fn support(&self) -> (f64, f64) {
        match *self {
            BaseDistribution::Uniform { lo, hi } | BaseDistribution::Beta { lo, hi, .. } => {
                (lo, hi)
            }
        }
    }

    pub fn validate(&self) -> Result<(), String> {
        let (lo, hi) = self.support();
        let shape_ok = match *self {
            BaseDistribution::Beta { a, b, .. } => a > 0.0 && b > 0.0,
            _ => true,
        };
        if lo.is_finite() && hi.is_finite() && lo < hi && shape_ok {
            Ok(())
        } else {
            Err(format!("invalid base distribution {self:?}"))
        }
    }

    pub fn cdf(&self, x: f64) -> f64 {
        let (lo, hi) = self.support();
        let u = ((x - lo) / (hi - lo)).clamp(0.0, 1.0);
        match *self {
            BaseDistribution::Uniform { .. } => u,
            BaseDistribution::Beta { a, b, .. } => Beta::new(a, b).unwrap().cdf(u),
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let (lo, hi) = self.support();
        let u: f64 = match *self {
            BaseDistribution::Uniform { .. } => rng.random(),
            BaseDistribution::Beta { a, b, .. } => BetaSampler::new(a, b).unwrap().sample(rng),
        };
        // Keep the half-open support even when u rounds to 1.
        (lo + (hi - lo) * u).min(hi - (hi - lo) * f64::EPSILON)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::RngStream;

    #[test]
    fn degenerate_normal_is_a_point_mass() {
        let d = WeightDistribution::Normal { mean: 1.0, sd: 0.0 };
        let mut rng = RngStream::new(1);
        assert_eq!(d.sample(&mut rng), 1.0);
        assert_eq!(d.atoms(), Some(vec![(1.0, 1.0)]));
        assert_eq!(d.density(1.0), 1.0);
    }

    #[test]
    fn discrete_requires_normalization() {
        let bad = WeightDistribution::Discrete {
            support: vec![(1.0, 0.5)],
        };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn beta_base_cdf_endpoints() {
        let g = BaseDistribution::Beta {
            a: 2.0,
            b: 3.0,
            lo: 0.0,
            hi: 2.0,
        };
        assert_eq!(g.cdf(-1.0), 0.0);
        assert_eq!(g.cdf(2.0), 1.0);
        // Beta(2,3) cdf at 1/2 is 11/16.
        assert!((g.cdf(1.0) - 11.0 / 16.0).abs() < 1e-12);
    }
}
