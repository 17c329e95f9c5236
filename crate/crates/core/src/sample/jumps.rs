//! Exact simulation of the jumps of a Poisson process on `(0, ∞)` with
//! intensity `scale·ρ`, restricted to jumps of size at least `eps` when `ρ`
//! has infinite mass near zero.
//!
//! Each kernel piece is covered by envelopes whose mass and inverse cdf are
//! explicit: power laws `c·w^p` on bounded segments, and an exponential on
//! the far tail. Points drawn from an envelope are kept with probability
//! `density / envelope`.

use rand::Rng;
use rand_distr::{Distribution, Exp};

use super::poisson::sample_poisson_count;
use crate::levy::half::{HalfLine, Kernel, Piece};
use crate::levy::LevyError;

#[derive(Debug, Clone)]
enum Envelope {
    /// `c·w^p` on `[s, e)`.
    Power { s: f64, e: f64, c: f64, p: f64 },
    /// `c·e^{-rate (w - start)}` on `[start, ∞)`.
    Exp { start: f64, c: f64, rate: f64 },
}

impl Envelope {
    fn mass(&self) -> f64 {
        match *self {
            Envelope::Power { s, e, c, p } => {
                let q = p + 1.0;
                if q.abs() < 1e-12 {
                    c * (e / s).ln()
                } else {
                    let top = if e.is_infinite() { 0.0 } else { e.powf(q) };
                    c * (top - s.powf(q)) / q
                }
            }
            Envelope::Exp { c, rate, .. } => c / rate,
        }
    }

    fn value(&self, w: f64) -> f64 {
        match *self {
            Envelope::Power { c, p, .. } => c * w.powf(p),
            Envelope::Exp { start, c, rate } => c * (-rate * (w - start)).exp(),
        }
    }

    fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match *self {
            Envelope::Power { s, e, p, .. } => {
                let u: f64 = rng.random();
                let q = p + 1.0;
                let w = if q.abs() < 1e-12 {
                    s * (e / s).powf(u)
                } else {
                    let lo = s.powf(q);
                    let hi = if e.is_infinite() { 0.0 } else { e.powf(q) };
                    (lo + u * (hi - lo)).powf(1.0 / q)
                };
                w.clamp(s, e)
            }
            Envelope::Exp { start, rate, .. } => start + Exp::new(rate).unwrap().sample(rng),
        }
    }
}

#[derive(Debug, Clone)]
struct KernelPlan {
    kernel: Kernel,
    envelopes: Vec<(Envelope, f64)>,
}

impl KernelPlan {
    fn new(kernel: Kernel, start: f64) -> Self {
        let (p, r, hi, coef) = (kernel.exponent, kernel.rate, kernel.hi, kernel.coef);
        let mut envelopes = Vec::new();
        if start < hi {
            if r == 0.0 {
                envelopes.push(Envelope::Power {
                    s: start,
                    e: hi,
                    c: coef,
                    p,
                });
            } else {
                // Segments of width 1/r bound e^{-rw} by its left-end value, so
                // acceptance stays above e^{-1}.
                let step = 1.0 / r;
                let far = (start.max(step) + 20.0 * step).max(2.0 * p.max(0.0) / r);
                let mut s = start;
                while s < hi.min(far) {
                    let e = if s < step { step } else { s + step }.min(hi).min(far);
                    envelopes.push(Envelope::Power {
                        s,
                        e,
                        c: coef * (-r * s).exp(),
                        p,
                    });
                    s = e;
                }
                if hi > far {
                    // w^p e^{-rw} ≤ far^p e^{-r·far} e^{-(r/2)(w - far)} once far ≥ 2p/r.
                    let rate = if p <= 0.0 { r } else { r / 2.0 };
                    envelopes.push(Envelope::Exp {
                        start: far,
                        c: coef * far.powf(p) * (-r * far).exp(),
                        rate,
                    });
                }
            }
        }
        let envelopes = envelopes
            .into_iter()
            .map(|env| {
                let m = env.mass();
                (env, m)
            })
            .filter(|(_, m)| *m > 0.0)
            .collect();
        Self { kernel, envelopes }
    }

    fn sample<R: Rng + ?Sized>(&self, scale: f64, rng: &mut R, out: &mut Vec<f64>) {
        for (env, mass) in &self.envelopes {
            let n = sample_poisson_count(scale * mass, rng);
            for _ in 0..n {
                let w = env.draw(rng);
                let accept = self.kernel.density(w) / env.value(w);
                debug_assert!(
                    accept <= 1.0 + 1e-9,
                    "envelope below density at {w}: {accept}"
                );
                if accept >= 1.0 || rng.random::<f64>() < accept {
                    out.push(w);
                }
            }
        }
    }
}

/// Precomputed sampler for one half-line.
#[derive(Debug, Clone, Default)]
pub(crate) struct HalfPlan {
    atoms: Vec<(f64, f64)>,
    kernels: Vec<KernelPlan>,
    /// `∫_{w < eps} w ρ(dw)` over the truncated kernels, per unit scale.
    pub remainder: f64,
    /// Expected number of generated points per unit scale, before thinning.
    pub envelope_mass: f64,
}

impl HalfPlan {
    pub fn new(half: &HalfLine, eps: f64) -> Result<Self, LevyError> {
        let mut plan = HalfPlan::default();
        for piece in &half.pieces {
            match piece {
                Piece::Atoms(a) => plan.atoms.extend(a.iter().copied()),
                Piece::Kernel(k) => {
                    if k.hi <= k.lo {
                        continue;
                    }
                    let start = if k.finite_activity() {
                        k.lo
                    } else {
                        if !(eps > 0.0) {
                            return Err(LevyError::InvalidParameter(
                                "infinite activity needs a positive truncation eps".into(),
                            ));
                        }
                        let start = k.lo.max(eps);
                        if start > k.lo {
                            plan.remainder += k
                                .restricted(k.lo, start)
                                .integrate(&|w| w, 1.0, 1.0)?
                                .ok_or(LevyError::NotIntegrable)?;
                        }
                        start
                    };
                    let kp = KernelPlan::new(k.clone(), start);
                    if kp.envelopes.iter().any(|(_, m)| !m.is_finite()) {
                        return Err(LevyError::NotIntegrable);
                    }
                    plan.kernels.push(kp);
                }
            }
        }
        plan.envelope_mass = plan.atoms.iter().map(|(_, m)| m).sum::<f64>()
            + plan
                .kernels
                .iter()
                .flat_map(|k| k.envelopes.iter().map(|(_, m)| m))
                .sum::<f64>();
        Ok(plan)
    }

    /// Appends jump sizes of a Poisson process with intensity `scale·ρ` to `out`.
    pub fn sample<R: Rng + ?Sized>(&self, scale: f64, rng: &mut R, out: &mut Vec<f64>) {
        for (w, m) in &self.atoms {
            let n = sample_poisson_count(scale * m, rng);
            out.extend(std::iter::repeat_n(*w, n as usize));
        }
        for k in &self.kernels {
            k.sample(scale, rng, out);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::levy::Tilt;
    use crate::rng::RngStream;

    fn kernel(coef: f64, exponent: f64, rate: f64, hi: f64) -> Kernel {
        Kernel {
            coef,
            exponent,
            rate,
            lo: 0.0,
            hi,
            tilts: Vec::new(),
        }
    }

    #[test]
    fn envelope_masses_match_integrals() {
        for k in [
            kernel(1.0, -1.0, 2.0, f64::INFINITY),
            kernel(0.5, 1.5, 0.3, f64::INFINITY),
            kernel(2.0, -0.5, 0.0, 3.0),
        ] {
            let start = 1e-3;
            let plan = KernelPlan::new(k.clone(), start);
            for (env, _) in &plan.envelopes {
                let (a, b) = match *env {
                    Envelope::Power { s, e, .. } => (s, e),
                    Envelope::Exp { start, .. } => (start, f64::INFINITY),
                };
                let q = crate::quad::integrate(|w| env.value(w), a, b, &Default::default())
                    .unwrap()
                    .value;
                assert!((q - env.mass()).abs() < (1e-8 * q).max(1e-13), "{env:?}");
                for i in 0..50 {
                    let w = a + (b.min(a + 100.0) - a) * (i as f64 + 0.5) / 50.0;
                    assert!(k.density(w) <= env.value(w) * (1.0 + 1e-12));
                }
            }
        }
    }

    #[test]
    fn jump_counts_above_threshold() {
        // Jumps of w^{-1} e^{-w} above 0.5 are Poisson with mean E1(0.5).
        let k = kernel(1.0, -1.0, 1.0, f64::INFINITY);
        let half = HalfLine {
            pieces: vec![Piece::Kernel(k)],
        };
        let plan = HalfPlan::new(&half, 0.5).unwrap();
        let e1 = 0.559_773_594_776_160_8;
        assert!((plan.remainder - (1.0 - (-0.5f64).exp())).abs() < 1e-9);
        let mut rng = RngStream::new(11);
        let reps = 20_000;
        let mut total = 0usize;
        let mut out = Vec::new();
        for _ in 0..reps {
            out.clear();
            plan.sample(1.0, &mut rng, &mut out);
            total += out.len();
            assert!(out.iter().all(|&w| w >= 0.5));
        }
        let m = total as f64 / reps as f64;
        assert!((m - e1).abs() < 4.0 * (e1 / reps as f64).sqrt(), "{m}");
    }

    #[test]
    fn tilted_kernel_mean_jump_count() {
        // e^{-w} (1 − w^{1.5} e^{-w²}) on (0, ∞): mass 1 − ∫ w^{1.5} e^{-w-w²} dw.
        let mut k = kernel(1.0, 0.0, 1.0, f64::INFINITY);
        k.tilts.push((Tilt::GaussianNull { alpha: 0.5 }, 1));
        let expect = 1.0
            - crate::quad::integrate(
                |w: f64| w.powf(1.5) * (-w - w * w).exp(),
                0.0,
                f64::INFINITY,
                &Default::default(),
            )
            .unwrap()
            .value;
        let plan = HalfPlan::new(
            &HalfLine {
                pieces: vec![Piece::Kernel(k)],
            },
            0.0,
        )
        .unwrap();
        let mut rng = RngStream::new(5);
        let reps = 40_000;
        let mut total = 0usize;
        let mut out = Vec::new();
        for _ in 0..reps {
            out.clear();
            plan.sample(3.0, &mut rng, &mut out);
            total += out.len();
        }
        let m = total as f64 / reps as f64;
        assert!((m - 3.0 * expect).abs() < 4.0 * (3.0 * expect / reps as f64).sqrt());
    }
}
