use nalgebra::{DMatrix, SymmetricEigen};
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::SampleError;
use crate::measure::{Interval, SignedMeasure, StepDensity};

/// Finite-partition description of a Gaussian random measure: cell covariance
/// `cov[i][j] = ν0(A_i, A_j)` and mean measure `μ(A_i) = E|ξ(A_i)|`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrmKernelSpec {
    pub partition: Vec<Interval<f64>>,
    pub cov: Vec<Vec<f64>>,
    #[serde(default)]
    pub mean_measure: Vec<f64>,
    /// Declared bound `k` on `Σ_i cov[i][i]^{1/2}`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bound: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GrmCheck {
    pub pd: bool,
    pub sqrt_sum: f64,
    pub min_eigenvalue: f64,
    pub within_bound: bool,
}

impl GrmKernelSpec {
    pub fn new(partition: Vec<Interval<f64>>, cov: Vec<Vec<f64>>) -> Result<Self, SampleError> {
        let spec = Self {
            partition,
            cov,
            mean_measure: Vec::new(),
            bound: None,
        };
        spec.validate_shape()?;
        Ok(spec)
    }

    /// `cov = m mᵀ` with `m_i = weights(A_i)`: `ξ(A) = Z·m(A)` for one standard normal `Z`.
    pub fn rank_one(partition: Vec<Interval<f64>>, weights: &[f64]) -> Result<Self, SampleError> {
        let cov = weights
            .iter()
            .map(|a| weights.iter().map(|b| a * b).collect())
            .collect();
        let mut spec = Self::new(partition, cov)?;
        spec.mean_measure = weights
            .iter()
            .map(|w| w.abs() * (2.0 / std::f64::consts::PI).sqrt())
            .collect();
        Ok(spec)
    }

    /// Independent cells with variance `sigma2·|A_i|`.
    pub fn white_noise(partition: Vec<Interval<f64>>, sigma2: f64) -> Result<Self, SampleError> {
        let n = partition.len();
        let cov = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        if i == j {
                            sigma2 * partition[i].len()
                        } else {
                            0.0
                        }
                    })
                    .collect()
            })
            .collect();
        Self::new(partition, cov)
    }

    pub fn dim(&self) -> usize {
        self.partition.len()
    }

    fn validate_shape(&self) -> Result<(), SampleError> {
        let n = self.partition.len();
        if self.cov.len() != n || self.cov.iter().any(|r| r.len() != n) {
            return Err(SampleError::InvalidParameter(format!(
                "covariance must be {n}×{n} to match the partition"
            )));
        }
        if self.cov.iter().flatten().any(|v| !v.is_finite()) {
            return Err(SampleError::InvalidParameter(
                "covariance has non-finite entries".into(),
            ));
        }
        for i in 0..n {
            for j in 0..i {
                if self.cov[i][j] != self.cov[j][i] {
                    return Err(SampleError::InvalidParameter(format!(
                        "covariance is not symmetric at ({i}, {j})"
                    )));
                }
            }
        }
        let mut cells: Vec<_> = self.partition.iter().collect();
        cells.sort_by(|a, b| a.lo().total_cmp(b.lo()));
        if cells.windows(2).any(|w| w[0].hi() > w[1].lo()) {
            return Err(SampleError::InvalidParameter(
                "partition cells overlap".into(),
            ));
        }
        Ok(())
    }

    fn matrix(&self) -> DMatrix<f64> {
        let n = self.dim();
        DMatrix::from_fn(n, n, |i, j| self.cov[i][j])
    }
}

/// Positive semidefiniteness (eigenvalue floor `-1e-10·λ_max`) and `Σ cov[i][i]^{1/2}`.
pub fn check_grm_kernel(spec: &GrmKernelSpec) -> GrmCheck {
    let sqrt_sum: f64 = (0..spec.dim())
        .map(|i| spec.cov[i][i].max(0.0).sqrt())
        .sum();
    let within_bound = spec.bound.is_none_or(|k| sqrt_sum <= k);
    if spec.dim() == 0 {
        return GrmCheck {
            pd: true,
            sqrt_sum,
            min_eigenvalue: 0.0,
            within_bound,
        };
    }
    let eig = SymmetricEigen::new(spec.matrix()).eigenvalues;
    let max = eig.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let min = eig.iter().fold(f64::INFINITY, |m, v| m.min(*v));
    let symmetric = spec
        .cov
        .iter()
        .enumerate()
        .all(|(i, r)| r.iter().enumerate().all(|(j, v)| *v == spec.cov[j][i]));
    GrmCheck {
        pd: symmetric && min >= -1e-10 * max,
        sqrt_sum,
        min_eigenvalue: min,
        within_bound,
    }
}

/// Factor `L` with `L Lᵀ = cov`, built by Cholesky with zero columns for
/// pivots below the ridge, so exactly singular kernels stay exactly singular.
#[derive(Debug, Clone)]
pub struct GrmSampler {
    factor: Vec<Vec<f64>>,
}

const RIDGE: f64 = 1e-12;

impl GrmSampler {
    pub fn new(spec: &GrmKernelSpec) -> Result<Self, SampleError> {
        spec.validate_shape()?;
        let n = spec.dim();
        let scale = (0..n).map(|i| spec.cov[i][i].abs()).fold(0.0, f64::max);
        let tol = RIDGE * scale.max(f64::MIN_POSITIVE);
        let mut l = vec![vec![0.0; n]; n];
        for j in 0..n {
            let d = spec.cov[j][j] - (0..j).map(|k| l[j][k] * l[j][k]).sum::<f64>();
            if d < -tol {
                return Err(SampleError::NotPsd(format!(
                    "pivot {j} is {d:e} after elimination"
                )));
            }
            if d <= tol {
                for i in j + 1..n {
                    let off = spec.cov[i][j] - (0..j).map(|k| l[i][k] * l[j][k]).sum::<f64>();
                    if off.abs() > tol.sqrt() * scale.sqrt().max(1.0) {
                        return Err(SampleError::NotPsd(format!(
                            "zero pivot {j} with nonzero coupling to cell {i}"
                        )));
                    }
                }
                continue;
            }
            let root = d.sqrt();
            l[j][j] = root;
            for i in j + 1..n {
                let off = spec.cov[i][j] - (0..j).map(|k| l[i][k] * l[j][k]).sum::<f64>();
                l[i][j] = off / root;
            }
        }
        Ok(Self { factor: l })
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<f64> {
        let z: Vec<f64> = (0..self.factor.len())
            .map(|_| rng.sample(StandardNormal))
            .collect();
        self.factor
            .iter()
            .map(|row| row.iter().zip(&z).map(|(l, z)| l * z).sum())
            .collect()
    }
}

/// One draw of the cell values `(ξ(A_1), …, ξ(A_n))`.
pub fn sample_grm<R: Rng + ?Sized>(
    spec: &GrmKernelSpec,
    rng: &mut R,
) -> Result<Vec<f64>, SampleError> {
    Ok(GrmSampler::new(spec)?.sample(rng))
}

/// Spreads each cell value uniformly over its cell, giving a measure whose
/// value on every cell is the sampled one.
pub fn grm_to_measure(
    partition: &[Interval<f64>],
    values: &[f64],
) -> Result<SignedMeasure<f64>, SampleError> {
    let mut cells: Vec<(f64, f64, f64)> = partition
        .iter()
        .zip(values)
        .filter(|(iv, _)| !iv.is_empty())
        .map(|(iv, v)| (*iv.lo(), *iv.hi(), v / iv.len()))
        .collect();
    cells.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut breaks = Vec::new();
    let mut levels = Vec::new();
    for (lo, hi, level) in cells {
        match breaks.last() {
            Some(&last) if last == lo => {}
            Some(_) => {
                levels.push(0.0);
                breaks.push(lo);
            }
            None => breaks.push(lo),
        }
        levels.push(level);
        breaks.push(hi);
    }
    Ok(SignedMeasure::from_density(StepDensity::new(
        breaks, levels,
    )?))
}
