//! Measures on the open half-line `(0, ∞)`.
//!
//! Every [`WeightMeasure`](super::WeightMeasure) splits into a positive half
//! and a reflected negative half. Each half is a sum of pieces: a list of
//! atoms, or a power–exponential kernel `c·w^p·e^{-bw}` on `[lo, hi)`,
//! optionally multiplied by tilt factors with values in `[0, 1]`.

use num_complex::Complex64;

use super::Tilt;
use crate::quad::{self, QuadError, QuadOptions};

#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Kernel {
    pub coef: f64,
    pub exponent: f64,
    pub rate: f64,
    pub lo: f64,
    pub hi: f64,
    pub tilts: Vec<(Tilt, u32)>,
}

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum Piece {
    Atoms(Vec<(f64, f64)>),
    Kernel(Kernel),
}

/// A measure on `(0, ∞)` given as a sum of pieces.
#[derive(Debug, Clone, PartialEq, Default)]
pub(crate) struct HalfLine {
    pub pieces: Vec<Piece>,
}

/// Decay of an integrand at `+∞`.
#[derive(Debug, Clone, Copy)]
pub(crate) enum Tail {
    /// Behaves like `w^order`.
    Power(f64),
    /// Decays at least exponentially.
    Fast,
}

pub(crate) fn opts() -> QuadOptions<f64> {
    QuadOptions::default()
}

/// `∫_lo^hi f`, where `f(w) ~ w^order0` at `0` (used only when `lo == 0`)
/// and `f` decays per `tail` when `hi == ∞`. `None` means divergent.
pub(crate) fn integrate_half(
    f: &dyn Fn(f64) -> f64,
    lo: f64,
    hi: f64,
    order0: f64,
    tail: Tail,
) -> Result<Option<f64>, QuadError> {
    if hi <= lo {
        return Ok(Some(0.0));
    }
    let o = opts();
    let split = 1.0_f64.clamp(lo, hi);
    let mut total = 0.0;
    if lo < split {
        if lo == 0.0 {
            if order0 <= -1.0 {
                return Ok(None);
            }
            total += quad::integrate_endpoint_power(f, 0.0, split, order0, &o)?.value;
        } else {
            total += quad::integrate_finite(f, lo, split, &o)?.value;
        }
    }
    if hi > split {
        if hi.is_finite() {
            total += quad::integrate_finite(f, split, hi, &o)?.value;
        } else {
            match tail {
                Tail::Fast => total += quad::integrate(f, split, f64::INFINITY, &o)?.value,
                Tail::Power(order) => {
                    if order >= -1.0 {
                        return Ok(None);
                    }
                    // w = 1/y turns the algebraic tail into an endpoint power at y = 0.
                    let g = |y: f64| f(1.0 / y) / (y * y);
                    total += quad::integrate_endpoint_power(g, 0.0, 1.0 / split, -order - 2.0, &o)?
                        .value;
                }
            }
        }
    }
    Ok(Some(total))
}

impl Kernel {
    pub fn tilt_factor(&self, w: f64) -> f64 {
        self.tilts
            .iter()
            .map(|(t, m)| t.value(w).powi(*m as i32))
            .product()
    }

    /// Untilted density `c·w^p·e^{-bw}` on `[lo, hi)`.
    pub fn envelope(&self, w: f64) -> f64 {
        if w < self.lo || w >= self.hi || w <= 0.0 {
            return 0.0;
        }
        let mut v = self.coef * w.powf(self.exponent);
        if self.rate > 0.0 {
            v *= (-self.rate * w).exp();
        }
        v
    }

    pub fn density(&self, w: f64) -> f64 {
        let e = self.envelope(w);
        if e == 0.0 || self.tilts.is_empty() {
            e
        } else {
            e * self.tilt_factor(w)
        }
    }

    fn tail(&self, order_inf: f64) -> Tail {
        if self.rate > 0.0 || order_inf == f64::NEG_INFINITY {
            Tail::Fast
        } else {
            Tail::Power(self.exponent + order_inf)
        }
    }

    /// `∫ g(w) k(w) dw` for `g(w) ~ w^order0` at 0 and `~ w^order_inf` at ∞;
    /// `order_inf = -∞` declares that `g` decays faster than any power.
    pub fn integrate(
        &self,
        g: &dyn Fn(f64) -> f64,
        order0: f64,
        order_inf: f64,
    ) -> Result<Option<f64>, QuadError> {
        let f = |w: f64| {
            let d = self.density(w);
            if d == 0.0 {
                0.0
            } else {
                g(w) * d
            }
        };
        integrate_half(
            &f,
            self.lo,
            self.hi,
            self.exponent + order0,
            self.tail(order_inf),
        )
    }

    /// Finite iff `∫ k < ∞` (decided from the exponents; tilts tend to 1 at 0).
    pub fn finite_activity(&self) -> bool {
        let zero_ok = self.lo > 0.0 || self.exponent > -1.0;
        let inf_ok = self.hi.is_finite() || self.rate > 0.0 || self.exponent < -1.0;
        zero_ok && inf_ok
    }

    pub fn restricted(&self, lo: f64, hi: f64) -> Kernel {
        Kernel {
            lo: self.lo.max(lo),
            hi: self.hi.min(hi),
            ..self.clone()
        }
    }

    /// `∫ (e^{itw} − 1) k(w) dw`.
    pub fn char_integral(&self, t: f64) -> Result<Option<Complex64>, QuadError> {
        if t == 0.0 || self.hi <= self.lo {
            return Ok(Some(Complex64::new(0.0, 0.0)));
        }
        if self.hi.is_infinite() && self.rate == 0.0 {
            return self.char_integral_power_tail(t);
        }
        let re = self.integrate(&|w| (t * w).cos() - 1.0, 2.0, 0.0)?;
        let im = self.integrate(&|w| (t * w).sin(), 1.0, 0.0)?;
        Ok(re.zip(im).map(|(re, im)| Complex64::new(re, im)))
    }

    /// Pure power law on `[lo, ∞)`: closed form on `[0, ∞)` minus the numeric piece
    /// on `[0, lo)`, plus a numeric correction for the tilts.
    fn char_integral_power_tail(&self, t: f64) -> Result<Option<Complex64>, QuadError> {
        let beta = -(self.exponent + 1.0);
        if !(beta > 0.0 && beta < 1.0) {
            return Ok(None);
        }
        // ∫_0^∞ (e^{itw} − 1) w^{-1-β} dw = Γ(−β) (−it)^β
        let gamma_neg = -statrs::function::gamma::gamma(1.0 - beta) / beta;
        let phase = -t.signum() * std::f64::consts::FRAC_PI_2 * beta;
        let mut psi = Complex64::from_polar(self.coef * gamma_neg * t.abs().powf(beta), phase);
        if self.lo > 0.0 {
            let head = Kernel {
                lo: 0.0,
                hi: self.lo,
                tilts: Vec::new(),
                ..self.clone()
            };
            match head.char_integral(t)? {
                Some(h) => psi -= h,
                None => return Ok(None),
            }
        }
        if !self.tilts.is_empty() {
            let corr = |g: &dyn Fn(f64) -> f64, order0: f64| {
                let f = |w: f64| g(w) * self.envelope(w) * (self.tilt_factor(w) - 1.0);
                integrate_half(
                    &f,
                    self.lo,
                    f64::INFINITY,
                    self.exponent + order0,
                    Tail::Fast,
                )
            };
            let re = corr(&|w| (t * w).cos() - 1.0, 2.0)?;
            let im = corr(&|w| (t * w).sin(), 1.0)?;
            match re.zip(im) {
                Some((re, im)) => psi += Complex64::new(re, im),
                None => return Ok(None),
            }
        }
        Ok(Some(psi))
    }
}

impl HalfLine {
    pub fn is_empty(&self) -> bool {
        self.pieces.iter().all(|p| match p {
            Piece::Atoms(a) => a.is_empty(),
            Piece::Kernel(k) => k.hi <= k.lo || k.coef == 0.0,
        })
    }

    pub fn integrate(
        &self,
        g: &dyn Fn(f64) -> f64,
        order0: f64,
        order_inf: f64,
    ) -> Result<Option<f64>, QuadError> {
        let mut total = 0.0;
        for piece in &self.pieces {
            match piece {
                Piece::Atoms(atoms) => total += atoms.iter().map(|(w, m)| m * g(*w)).sum::<f64>(),
                Piece::Kernel(k) => match k.integrate(g, order0, order_inf)? {
                    Some(v) => total += v,
                    None => return Ok(None),
                },
            }
        }
        Ok(Some(total))
    }

    pub fn finite_activity(&self) -> bool {
        self.pieces.iter().all(|p| match p {
            Piece::Atoms(_) => true,
            Piece::Kernel(k) => k.finite_activity(),
        })
    }

    pub fn density(&self, w: f64) -> f64 {
        self.pieces
            .iter()
            .map(|p| match p {
                Piece::Kernel(k) => k.density(w),
                Piece::Atoms(_) => 0.0,
            })
            .sum()
    }

    pub fn atoms(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.pieces.iter().flat_map(|p| match p {
            Piece::Atoms(a) => a.clone(),
            Piece::Kernel(_) => Vec::new(),
        })
    }

    /// Mass of the open interval `(a, b)` with `0 ≤ a < b`.
    pub fn mass_between(&self, a: f64, b: f64) -> Result<f64, QuadError> {
        let mut total = 0.0;
        for piece in &self.pieces {
            match piece {
                Piece::Atoms(atoms) => {
                    total += atoms
                        .iter()
                        .filter(|(w, _)| *w > a && *w < b)
                        .map(|(_, m)| m)
                        .sum::<f64>()
                }
                Piece::Kernel(k) => {
                    total += k
                        .restricted(a, b)
                        .integrate(&|_| 1.0, 0.0, 0.0)?
                        .unwrap_or(f64::INFINITY)
                }
            }
        }
        Ok(total)
    }

    pub fn char_integral(&self, t: f64) -> Result<Option<Complex64>, QuadError> {
        let mut psi = Complex64::new(0.0, 0.0);
        for piece in &self.pieces {
            match piece {
                Piece::Atoms(atoms) => {
                    for (w, m) in atoms {
                        psi += *m * (Complex64::new(0.0, t * w).exp() - 1.0);
                    }
                }
                Piece::Kernel(k) => match k.char_integral(t)? {
                    Some(v) => psi += v,
                    None => return Ok(None),
                },
            }
        }
        Ok(Some(psi))
    }
}
