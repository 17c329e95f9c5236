use rand::Rng;
use rand_distr::{Distribution, Poisson};

/// A Poisson(`mean`) count; `mean = 0` gives 0.
pub fn sample_poisson_count<R: Rng + ?Sized>(mean: f64, rng: &mut R) -> u64 {
    if mean <= 0.0 {
        return 0;
    }
    Poisson::new(mean)
        .expect("finite positive mean")
        .sample(rng) as u64
}

/// Homogeneous Poisson process of intensity `rate` on `[0, region_len)`.
pub fn sample_poisson_pp<R: Rng + ?Sized>(rate: f64, region_len: f64, rng: &mut R) -> Vec<f64> {
    assert!(
        rate >= 0.0 && region_len >= 0.0,
        "rate and region length must be nonnegative"
    );
    let n = sample_poisson_count(rate * region_len, rng);
    (0..n).map(|_| rng.random::<f64>() * region_len).collect()
}
