#![allow(dead_code)]

/// `I_n(x)` by its power series.
pub fn bessel_i(n: u32, x: f64) -> f64 {
    let half = x / 2.0;
    let mut term = (0..n).fold(1.0, |acc, k| acc * half / (k + 1) as f64);
    let mut sum = term;
    for m in 1..500 {
        term *= half * half / (m as f64 * (m + n) as f64);
        sum += term;
        if term < 1e-17 * sum {
            break;
        }
    }
    sum
}

/// `P(N1 − N2 = k) = e^{−(μ1+μ2)} (μ1/μ2)^{k/2} I_|k|(2√(μ1μ2))`.
pub fn skellam_bessel(k: i64, mu1: f64, mu2: f64) -> f64 {
    if mu1 == 0.0 || mu2 == 0.0 {
        let (mu, n) = if mu2 == 0.0 { (mu1, k) } else { (mu2, -k) };
        if n < 0 {
            return 0.0;
        }
        return poisson(n as u64, mu);
    }
    (-(mu1 + mu2)).exp()
        * (mu1 / mu2).powf(k as f64 / 2.0)
        * bessel_i(k.unsigned_abs() as u32, 2.0 * (mu1 * mu2).sqrt())
}

pub fn poisson(n: u64, mu: f64) -> f64 {
    let mut p = (-mu).exp();
    for i in 1..=n {
        p *= mu / i as f64;
    }
    p
}

/// `E1(x)` for `0 < x ≤ 2` by its convergent series.
pub fn exp_integral_e1(x: f64) -> f64 {
    let euler = 0.577_215_664_901_532_9;
    let mut sum = 0.0;
    let mut term = 1.0;
    for k in 1..200 {
        term *= -x / k as f64;
        sum += term / k as f64;
    }
    -euler - x.ln() - sum
}

/// Sample mean and its standard error.
pub fn mean_se(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let m = xs.iter().sum::<f64>() / n;
    let v = xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (n - 1.0);
    (m, (v / n).sqrt())
}

pub mod posterior_oracle;
