//! Summary statistics and goodness-of-fit tests used to validate samplers.

use statrs::distribution::{ChiSquared, ContinuousCDF};
use statrs::function::factorial::ln_factorial;

pub fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Unbiased sample variance.
pub fn variance(xs: &[f64]) -> f64 {
    covariance(xs, xs)
}

pub fn covariance(xs: &[f64], ys: &[f64]) -> f64 {
    assert_eq!(xs.len(), ys.len());
    let (mx, my) = (mean(xs), mean(ys));
    xs.iter()
        .zip(ys)
        .map(|(x, y)| (x - mx) * (y - my))
        .sum::<f64>()
        / (xs.len() as f64 - 1.0)
}

/// Pearson correlation; 0 when either sample is constant.
pub fn correlation(xs: &[f64], ys: &[f64]) -> f64 {
    let (vx, vy) = (variance(xs), variance(ys));
    if vx == 0.0 || vy == 0.0 {
        0.0
    } else {
        covariance(xs, ys) / (vx * vy).sqrt()
    }
}

pub fn poisson_pmf(k: i64, mu: f64) -> f64 {
    if k < 0 {
        return 0.0;
    }
    if mu == 0.0 {
        return if k == 0 { 1.0 } else { 0.0 };
    }
    (k as f64 * mu.ln() - mu - ln_factorial(k as u64)).exp()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChiSquareTest {
    pub statistic: f64,
    pub dof: usize,
    pub p_value: f64,
    pub bins: usize,
}

/// Pearson chi-square test of integer samples against a pmf.
///
/// Cells with expected count at least 5 are kept individually around the
/// mode; everything outside is pooled into one tail cell on each side, and a
/// tail cell that is still too small is merged into its neighbour.
pub fn chi_square_gof(samples: &[i64], pmf: impl Fn(i64) -> f64) -> ChiSquareTest {
    let n = samples.len() as f64;
    let (min, max) = (
        *samples.iter().min().expect("nonempty sample"),
        *samples.iter().max().unwrap(),
    );
    let mode = (min..=max)
        .max_by(|a, b| pmf(*a).total_cmp(&pmf(*b)))
        .unwrap();
    let (mut lo, mut hi) = (mode, mode);
    while n * pmf(lo - 1) >= 5.0 {
        lo -= 1;
    }
    while n * pmf(hi + 1) >= 5.0 {
        hi += 1;
    }
    let tail = |start: i64, step: i64, stop: i64| {
        let mut total = 0.0;
        let mut k = start;
        loop {
            let p = pmf(k);
            total += p;
            if (p < 1e-18 * total.max(1e-300) || p == 0.0) && (k - stop) * step > 0 {
                break;
            }
            k += step;
        }
        total
    };
    let mut expected: Vec<f64> = Vec::new();
    let mut observed: Vec<f64> = Vec::new();
    expected.push(n * tail(lo - 1, -1, min));
    observed.push(samples.iter().filter(|&&x| x < lo).count() as f64);
    for k in lo..=hi {
        expected.push(n * pmf(k));
        observed.push(samples.iter().filter(|&&x| x == k).count() as f64);
    }
    expected.push(n * tail(hi + 1, 1, max));
    observed.push(samples.iter().filter(|&&x| x > hi).count() as f64);
    for end in [0usize, 1] {
        let (i, j) = if end == 0 {
            (0, 1)
        } else {
            (expected.len() - 1, expected.len() - 2)
        };
        if expected.len() > 1 && expected[i] < 5.0 {
            expected[j] += expected[i];
            observed[j] += observed[i];
            expected.remove(i);
            observed.remove(i);
        }
    }
    let statistic: f64 = expected
        .iter()
        .zip(&observed)
        .map(|(e, o)| (o - e) * (o - e) / e)
        .sum();
    let bins = expected.len();
    let dof = bins.saturating_sub(1).max(1);
    let p_value = ChiSquared::new(dof as f64).unwrap().sf(statistic);
    ChiSquareTest {
        statistic,
        dof,
        p_value,
        bins,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KsTest {
    pub distance: f64,
    pub p_value: f64,
}

/// Kolmogorov distribution survival function `Q(λ) = 2 Σ (-1)^{k-1} e^{-2k²λ²}`.
fn kolmogorov_sf(lambda: f64) -> f64 {
    if lambda < 0.2 {
        return 1.0;
    }
    let mut sum = 0.0;
    let mut sign = 1.0;
    for k in 1..=100 {
        let term = (-2.0 * (k * k) as f64 * lambda * lambda).exp();
        sum += sign * term;
        if term < 1e-16 * sum.abs() {
            break;
        }
        sign = -sign;
    }
    (2.0 * sum).clamp(0.0, 1.0)
}

fn ks_p_value(distance: f64, effective_n: f64) -> f64 {
    let s = effective_n.sqrt();
    kolmogorov_sf((s + 0.12 + 0.11 / s) * distance)
}

/// One-sample Kolmogorov–Smirnov test against a continuous cdf.
pub fn ks_one_sample(samples: &[f64], cdf: impl Fn(f64) -> f64) -> KsTest {
    let mut xs = samples.to_vec();
    xs.sort_by(f64::total_cmp);
    let n = xs.len() as f64;
    let distance = xs
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            (f - i as f64 / n).abs().max(((i + 1) as f64 / n - f).abs())
        })
        .fold(0.0, f64::max);
    KsTest {
        distance,
        p_value: ks_p_value(distance, n),
    }
}

/// Two-sample Kolmogorov–Smirnov test. Ties are handled by advancing both
/// empirical cdfs past the common value.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> KsTest {
    let mut xs = a.to_vec();
    let mut ys = b.to_vec();
    xs.sort_by(f64::total_cmp);
    ys.sort_by(f64::total_cmp);
    let (n, m) = (xs.len(), ys.len());
    let (mut i, mut j) = (0, 0);
    let mut distance: f64 = 0.0;
    while i < n && j < m {
        let v = xs[i].min(ys[j]);
        while i < n && xs[i] <= v {
            i += 1;
        }
        while j < m && ys[j] <= v {
            j += 1;
        }
        distance = distance.max((i as f64 / n as f64 - j as f64 / m as f64).abs());
    }
    let effective = (n * m) as f64 / (n + m) as f64;
    KsTest {
        distance,
        p_value: ks_p_value(distance, effective),
    }
}
