use rand::Rng;
use statrs::function::factorial::ln_factorial;

use super::poisson::sample_poisson_pp;
use crate::measure::{Atom, SignedMeasure};
use crate::stats::poisson_pmf;

/// Skellam point process on `[0, 1)`.
pub fn sample_skellam_pp<R: Rng + ?Sized>(
    mu1_rate: f64,
    mu2_rate: f64,
    rng: &mut R,
) -> SignedMeasure<f64> {
    sample_skellam_pp_on(mu1_rate, mu2_rate, 1.0, rng)
}

/// Difference of two independent unit-mark Poisson processes with rates
/// `mu1_rate` and `mu2_rate` on `[0, horizon)`.
pub fn sample_skellam_pp_on<R: Rng + ?Sized>(
    mu1_rate: f64,
    mu2_rate: f64,
    horizon: f64,
    rng: &mut R,
) -> SignedMeasure<f64> {
    let pos = sample_poisson_pp(mu1_rate, horizon, rng);
    let neg = sample_poisson_pp(mu2_rate, horizon, rng);
    let atoms = pos
        .into_iter()
        .map(|x| Atom::new(x, 1.0))
        .chain(neg.into_iter().map(|x| Atom::new(x, -1.0)))
        .collect();
    SignedMeasure::from_atoms(atoms).expect("uniform locations are finite")
}

/// `P(N1 − N2 = k)` for independent `N1 ~ Poisson(mu1)`, `N2 ~ Poisson(mu2)`,
/// by summing `Pois(mu1, n + k)·Pois(mu2, n)` outward from the largest term
/// until terms drop below `1e-12` of the running total.
pub fn skellam_pmf(k: i64, mu1: f64, mu2: f64) -> f64 {
    assert!(
        mu1 >= 0.0 && mu2 >= 0.0,
        "Skellam means must be nonnegative"
    );
    if mu2 == 0.0 {
        return poisson_pmf(k, mu1);
    }
    if mu1 == 0.0 {
        return poisson_pmf(-k, mu2);
    }
    let n_min = (-k).max(0);
    let log_term = |n: i64| {
        let j = n + k;
        j as f64 * mu1.ln() + n as f64 * mu2.ln()
            - mu1
            - mu2
            - ln_factorial(j as u64)
            - ln_factorial(n as u64)
    };
    let kf = k as f64;
    let peak = (0.5 * (-kf + (kf * kf + 4.0 * mu1 * mu2).sqrt())).floor() as i64;
    let start = peak.max(n_min);
    let first = log_term(start).exp();
    let mut total = first;
    let mut term = first;
    let mut n = start;
    // Ratio of consecutive terms: mu1·mu2 / ((n + k + 1)(n + 1)).
    loop {
        term *= mu1 * mu2 / (((n + k + 1) * (n + 1)) as f64);
        n += 1;
        total += term;
        if term <= 1e-12 * total {
            break;
        }
    }
    term = first;
    n = start;
    while n > n_min {
        term *= ((n + k) * n) as f64 / (mu1 * mu2);
        n -= 1;
        total += term;
        if term <= 1e-12 * total {
            break;
        }
    }
    total
}
