use serde::{Deserialize, Serialize};

use super::half::{HalfLine, Kernel, Piece};
use super::LevyError;

/// Which half-lines a density family charges.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Sides {
    Positive,
    Negative,
    Both,
}

/// Parametric jump-size densities. Each one is a power–exponential kernel
/// `coef·|w|^exponent·e^{-rate|w|}` on `lo ≤ |w| < hi`, so its integrability
/// near 0 and at ∞ is known from the exponents alone.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", content = "params", rename_all = "snake_case")]
pub enum DensityFamily {
    /// `a·w^{-1}·e^{-b w}`.
    Gamma { a: f64, b: f64 },
    /// `a·w^{-1-σ}` truncated at `w_max`.
    Stable { a: f64, sigma: f64, w_max: f64 },
    /// `coef·|w|^{α-2}`, optionally restricted to `|w| < cutoff`.
    PowerLaw {
        alpha: f64,
        #[serde(default = "one")]
        coef: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        cutoff: Option<f64>,
    },
    /// `a·e^{-b|w|}`.
    Exponential { a: f64, b: f64 },
    /// The general kernel.
    PowerExp {
        coef: f64,
        exponent: f64,
        #[serde(default)]
        rate: f64,
        #[serde(default)]
        lo: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        hi: Option<f64>,
    },
}

fn one() -> f64 {
    1.0
}

impl DensityFamily {
    fn default_sides(&self) -> Sides {
        match self {
            DensityFamily::Gamma { .. } | DensityFamily::Stable { .. } => Sides::Positive,
            _ => Sides::Both,
        }
    }

    fn kernel(&self) -> Kernel {
        let (coef, exponent, rate, lo, hi) = match *self {
            DensityFamily::Gamma { a, b } => (a, -1.0, b, 0.0, f64::INFINITY),
            DensityFamily::Stable { a, sigma, w_max } => (a, -1.0 - sigma, 0.0, 0.0, w_max),
            DensityFamily::PowerLaw {
                alpha,
                coef,
                cutoff,
                ..
            } => (coef, alpha - 2.0, 0.0, 0.0, cutoff.unwrap_or(f64::INFINITY)),
            DensityFamily::Exponential { a, b } => (a, 0.0, b, 0.0, f64::INFINITY),
            DensityFamily::PowerExp {
                coef,
                exponent,
                rate,
                lo,
                hi,
            } => (coef, exponent, rate, lo, hi.unwrap_or(f64::INFINITY)),
        };
        Kernel {
            coef,
            exponent,
            rate,
            lo,
            hi,
            tilts: Vec::new(),
        }
    }

    fn validate(&self) -> Result<(), LevyError> {
        let bad = |msg: &str| Err(LevyError::InvalidParameter(format!("{self:?}: {msg}")));
        let k = self.kernel();
        if !(k.coef.is_finite() && k.coef > 0.0) {
            return bad("coefficient must be positive");
        }
        if !k.exponent.is_finite() || !(k.rate.is_finite() && k.rate >= 0.0) {
            return bad("exponent and rate must be finite, rate ≥ 0");
        }
        if !(k.lo >= 0.0 && k.lo.is_finite() && k.hi > k.lo) {
            return bad("support must satisfy 0 ≤ lo < hi");
        }
        match *self {
            DensityFamily::Gamma { b, .. } | DensityFamily::Exponential { b, .. } if b <= 0.0 => {
                bad("rate b must be positive")
            }
            DensityFamily::Stable { sigma, w_max, .. }
                if !(sigma > 0.0 && sigma < 1.0 && w_max.is_finite()) =>
            {
                bad("σ must lie in (0,1) and w_max must be finite")
            }
            DensityFamily::PowerLaw { alpha, .. } if !(alpha > 0.0 && alpha.is_finite()) => {
                bad("α must be positive")
            }
            _ => Ok(()),
        }
    }
}

/// A density family together with the half-lines it charges.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Density {
    #[serde(flatten)]
    pub family: DensityFamily,
    pub sides: Sides,
}

impl Density {
    pub fn new(family: DensityFamily) -> Self {
        let sides = family.default_sides();
        Self { family, sides }
    }

    pub fn with_sides(family: DensityFamily, sides: Sides) -> Self {
        Self { family, sides }
    }
}

/// Thinning factors `φ(θ) ∈ [0,1]` depending on `|θ|` only, used to tilt a
/// weight measure into `φ(θ)^m ν(dθ)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", content = "params", rename_all = "snake_case")]
pub enum Tilt {
    /// `e^{-rate·|θ|}`.
    ExpAbs { rate: f64 },
    /// `1 − |θ|^{2-α}·e^{-θ²}`.
    GaussianNull { alpha: f64 },
}

impl Tilt {
    pub fn value(&self, theta: f64) -> f64 {
        1.0 - self.complement(theta)
    }

    /// `1 − φ(θ)`, evaluated without cancellation.
    pub fn complement(&self, theta: f64) -> f64 {
        let x = theta.abs();
        match *self {
            Tilt::ExpAbs { rate } => -(-rate * x).exp_m1(),
            Tilt::GaussianNull { alpha } => x.powf(2.0 - alpha) * (-x * x).exp(),
        }
    }

    /// Whether `1 − φ(θ)` decays faster than any power as `|θ| → ∞`.
    pub fn complement_decays_fast(&self) -> bool {
        matches!(self, Tilt::GaussianNull { .. })
    }

    /// Order of `1 − φ(θ)` as `θ → 0`.
    pub fn complement_order(&self) -> f64 {
        match *self {
            Tilt::ExpAbs { .. } => 1.0,
            Tilt::GaussianNull { alpha } => 2.0 - alpha,
        }
    }

    fn validate(&self) -> Result<(), LevyError> {
        let ok = match *self {
            Tilt::ExpAbs { rate } => rate > 0.0 && rate.is_finite(),
            Tilt::GaussianNull { alpha } => alpha > 0.0 && alpha < 2.0,
        };
        if ok {
            Ok(())
        } else {
            Err(LevyError::InvalidParameter(format!("{self:?}")))
        }
    }
}

/// The jump-size measure `ρ(dw)` on `ℝ∖{0}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WeightMeasure {
    /// `Σ mass_i δ_{w_i}`.
    FiniteDiscrete {
        atoms: Vec<(f64, f64)>,
    },
    Density(Density),
    /// `pos` on the positive half-line and `neg` reflected onto the negative one.
    /// Both components must live on `(0, ∞)`.
    TwoSidedComposite {
        pos: Box<WeightMeasure>,
        neg: Box<WeightMeasure>,
    },
    /// `φ(w)^power · base(dw)`.
    Tilted {
        base: Box<WeightMeasure>,
        tilt: Tilt,
        power: u32,
    },
}

impl WeightMeasure {
    pub fn zero() -> Self {
        WeightMeasure::FiniteDiscrete { atoms: Vec::new() }
    }

    /// Finite discrete measure; entries with equal `w` are merged and the list sorted.
    pub fn discrete(atoms: Vec<(f64, f64)>) -> Result<Self, LevyError> {
        let m = WeightMeasure::FiniteDiscrete {
            atoms: canonical_atoms(atoms),
        };
        m.validate()?;
        Ok(m)
    }

    pub fn density(family: DensityFamily) -> Result<Self, LevyError> {
        let m = WeightMeasure::Density(Density::new(family));
        m.validate()?;
        Ok(m)
    }

    pub fn density_on(family: DensityFamily, sides: Sides) -> Result<Self, LevyError> {
        let m = WeightMeasure::Density(Density::with_sides(family, sides));
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<(), LevyError> {
        match self {
            WeightMeasure::FiniteDiscrete { atoms } => {
                for (w, m) in atoms {
                    if !(w.is_finite() && *w != 0.0 && m.is_finite() && *m > 0.0) {
                        return Err(LevyError::InvalidParameter(format!(
                            "discrete atom ({w}, {m}) needs w ≠ 0 and mass > 0"
                        )));
                    }
                }
                Ok(())
            }
            WeightMeasure::Density(d) => d.family.validate(),
            WeightMeasure::TwoSidedComposite { pos, neg } => {
                pos.validate()?;
                neg.validate()?;
                for (name, part) in [("pos", pos), ("neg", neg)] {
                    if !part.negative_half().is_empty() {
                        return Err(LevyError::SupportViolation(format!(
                            "{name} component charges (-∞, 0)"
                        )));
                    }
                }
                Ok(())
            }
            WeightMeasure::Tilted { base, tilt, .. } => {
                base.validate()?;
                tilt.validate()
            }
        }
    }

    pub(crate) fn positive_half(&self) -> HalfLine {
        self.half(true)
    }

    /// The negative half reflected onto `(0, ∞)`.
    pub(crate) fn negative_half(&self) -> HalfLine {
        self.half(false)
    }

    fn half(&self, positive: bool) -> HalfLine {
        match self {
            WeightMeasure::FiniteDiscrete { atoms } => {
                let side: Vec<(f64, f64)> = atoms
                    .iter()
                    .filter(|(w, _)| (*w > 0.0) == positive)
                    .map(|(w, m)| (w.abs(), *m))
                    .collect();
                HalfLine {
                    pieces: if side.is_empty() {
                        Vec::new()
                    } else {
                        vec![Piece::Atoms(side)]
                    },
                }
            }
            WeightMeasure::Density(d) => {
                let charged = match d.sides {
                    Sides::Both => true,
                    Sides::Positive => positive,
                    Sides::Negative => !positive,
                };
                HalfLine {
                    pieces: if charged {
                        vec![Piece::Kernel(d.family.kernel())]
                    } else {
                        Vec::new()
                    },
                }
            }
            WeightMeasure::TwoSidedComposite { pos, neg } => {
                if positive {
                    pos.positive_half()
                } else {
                    neg.positive_half()
                }
            }
            WeightMeasure::Tilted { base, tilt, power } => {
                let mut half = base.half(positive);
                for piece in &mut half.pieces {
                    apply_tilt(piece, tilt, *power);
                }
                half
            }
        }
    }

    /// Multiplies by `φ^power`, merging with an existing tilt of the same factor.
    pub fn tilted(self, tilt: Tilt, power: u32) -> Self {
        if power == 0 {
            return self;
        }
        match self {
            WeightMeasure::Tilted {
                base,
                tilt: existing,
                power: p,
            } if existing == tilt => WeightMeasure::Tilted {
                base,
                tilt,
                power: p + power,
            },
            other => WeightMeasure::Tilted {
                base: Box::new(other),
                tilt,
                power,
            },
        }
    }

    /// Density with respect to Lebesgue measure at `w` (zero for purely atomic parts).
    pub fn density_at(&self, w: f64) -> f64 {
        if w > 0.0 {
            self.positive_half().density(w)
        } else if w < 0.0 {
            self.negative_half().density(-w)
        } else {
            0.0
        }
    }

    /// Atoms `(w, mass)` of the discrete parts, negative ones with their sign restored.
    pub fn signed_atoms(&self) -> Vec<(f64, f64)> {
        let mut out: Vec<(f64, f64)> = self.positive_half().atoms().collect();
        out.extend(self.negative_half().atoms().map(|(w, m)| (-w, m)));
        out.sort_by(|a, b| a.0.total_cmp(&b.0));
        out
    }

    pub fn has_density(&self) -> bool {
        let has = |h: HalfLine| h.pieces.iter().any(|p| matches!(p, Piece::Kernel(_)));
        has(self.positive_half()) || has(self.negative_half())
    }

    /// Mass of the open interval `(a, b)`; either bound may be infinite.
    pub fn mass_between(&self, a: f64, b: f64) -> Result<f64, LevyError> {
        if a >= b {
            return Ok(0.0);
        }
        let mut total = 0.0;
        if b > 0.0 {
            total += self.positive_half().mass_between(a.max(0.0), b)?;
        }
        if a < 0.0 {
            total += self.negative_half().mass_between((-b).max(0.0), -a)?;
        }
        Ok(total)
    }

    /// `∫ g(w) ρ(dw)` over `ℝ∖{0}` with `|g(w)| ~ |w|^order0` at 0 and
    /// `~ |w|^order_inf` at ±∞ (`-∞` for faster than any power). `None`
    /// signals divergence.
    pub fn integrate(
        &self,
        g: impl Fn(f64) -> f64,
        order0: f64,
        order_inf: f64,
    ) -> Result<Option<f64>, LevyError> {
        let pos = self
            .positive_half()
            .integrate(&|w| g(w), order0, order_inf)?;
        let neg = self
            .negative_half()
            .integrate(&|w| g(-w), order0, order_inf)?;
        Ok(pos.zip(neg).map(|(p, n)| p + n))
    }

    /// True when the measure charges only `(0, ∞)`.
    pub fn is_positive(&self) -> bool {
        self.negative_half().is_empty()
    }

    /// Restriction to `(0, ∞)`.
    pub fn positive_part(&self) -> WeightMeasure {
        self.clone().restricted_to(true)
    }

    /// Restriction to `(−∞, 0)`, reflected onto `(0, ∞)`.
    pub fn reflected_negative_part(&self) -> WeightMeasure {
        self.clone().restricted_to(false)
    }

    fn restricted_to(self, positive: bool) -> WeightMeasure {
        match self {
            WeightMeasure::FiniteDiscrete { atoms } => WeightMeasure::FiniteDiscrete {
                atoms: canonical_atoms(
                    atoms
                        .into_iter()
                        .filter(|(w, _)| (*w > 0.0) == positive)
                        .map(|(w, m)| (w.abs(), m))
                        .collect(),
                ),
            },
            WeightMeasure::Density(d) => {
                let charged = match d.sides {
                    Sides::Both => true,
                    Sides::Positive => positive,
                    Sides::Negative => !positive,
                };
                if charged {
                    WeightMeasure::Density(Density::with_sides(d.family, Sides::Positive))
                } else {
                    WeightMeasure::zero()
                }
            }
            WeightMeasure::TwoSidedComposite { pos, neg } => {
                if positive {
                    *pos
                } else {
                    *neg
                }
            }
            WeightMeasure::Tilted { base, tilt, power } => WeightMeasure::Tilted {
                base: Box::new(base.restricted_to(positive)),
                tilt,
                power,
            },
        }
    }
}

fn apply_tilt(piece: &mut Piece, tilt: &Tilt, power: u32) {
    match piece {
        Piece::Atoms(atoms) => {
            for (w, m) in atoms.iter_mut() {
                *m *= tilt.value(*w).powi(power as i32);
            }
            atoms.retain(|(_, m)| *m > 0.0);
        }
        Piece::Kernel(k) => match *tilt {
            // e^{-r|w|}^m is absorbed into the kernel's exponential rate.
            Tilt::ExpAbs { rate } => k.rate += rate * power as f64,
            _ => match k.tilts.iter_mut().find(|(t, _)| t == tilt) {
                Some((_, m)) => *m += power,
                None => k.tilts.push((*tilt, power)),
            },
        },
    }
}

fn canonical_atoms(mut atoms: Vec<(f64, f64)>) -> Vec<(f64, f64)> {
    atoms.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut out: Vec<(f64, f64)> = Vec::with_capacity(atoms.len());
    for (w, m) in atoms {
        match out.last_mut() {
            Some(last) if last.0 == w => last.1 += m,
            _ => out.push((w, m)),
        }
    }
    out
}
