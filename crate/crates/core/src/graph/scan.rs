use serde::{Deserialize, Serialize};

use super::{sample_counts, GraphError, NodeSampler, ObservedCounts};
use crate::levy::WeightMeasure;
use crate::rng::RngStream;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScanPoint {
    pub alpha: f64,
    pub mean_nodes: f64,
    pub mean_edges: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanResult {
    /// Least-squares slope of `log mean_edges` against `log mean_nodes`.
    pub slope: f64,
    pub points: Vec<ScanPoint>,
}

/// Averages replicate counts per window and fits the log-log slope.
pub fn fit_scan(alphas: &[f64], counts: &[Vec<ObservedCounts>]) -> Result<ScanResult, GraphError> {
    if alphas.len() < 3 {
        return Err(GraphError::InsufficientWindows(alphas.len()));
    }
    let mut points = Vec::with_capacity(alphas.len());
    for (&alpha, reps) in alphas.iter().zip(counts) {
        let n = reps.len() as f64;
        let mean_nodes = reps.iter().map(|c| c.n_nodes as f64).sum::<f64>() / n;
        let mean_edges = reps.iter().map(|c| c.n_edges as f64).sum::<f64>() / n;
        if !(mean_nodes > 0.0) {
            return Err(GraphError::DegenerateScan(alpha));
        }
        points.push(ScanPoint {
            alpha,
            mean_nodes,
            mean_edges,
        });
    }
    let xs: Vec<f64> = points.iter().map(|p| p.mean_nodes.ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.mean_edges.ln()).collect();
    let (mx, my) = (crate::stats::mean(&xs), crate::stats::mean(&ys));
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    Ok(ScanResult {
        slope: sxy / sxx,
        points,
    })
}

/// Mean observed nodes and edges over `reps` graphs per window, and the
/// slope of edges against nodes on log scales. Window `k`, replicate `r`
/// uses the stream `seed / k / r`.
pub fn sparsity_scan(
    rho: &WeightMeasure,
    alphas: &[f64],
    reps: usize,
    seed: u64,
    eps: f64,
) -> Result<ScanResult, GraphError> {
    if alphas.len() < 3 {
        return Err(GraphError::InsufficientWindows(alphas.len()));
    }
    if rho
        .integrate(|w| w.abs(), 1.0, 1.0)
        .map_err(crate::sample::SampleError::from)?
        .is_none()
    {
        return Err(GraphError::InfiniteMean);
    }
    let sampler = NodeSampler::new(rho, eps)?;
    let root = RngStream::new(seed);
    let counts: Vec<Vec<ObservedCounts>> = alphas
        .iter()
        .enumerate()
        .map(|(k, &alpha)| {
            (0..reps)
                .map(|r| {
                    let mut rng = root.split_path(&[k as u64, r as u64]);
                    let nodes = sampler.sample(alpha, &mut rng);
                    sample_counts(&nodes, &mut rng)
                })
                .collect()
        })
        .collect();
    fit_scan(alphas, &counts)
}
