//! Sparse signed random graphs driven by a CRSM.
//!
//! Nodes are the atoms `(θ_i, w_i)` of `W ~ CRSM(ρ, Lebesgue)` on `[0, α)`.
//! Same-sign nodes are joined by a Poisson number of directed multi-edges,
//! `n_ij ~ Poisson(|w_i w_j|)` per ordered pair, signed by the common sign;
//! nodes of opposite sign are never joined. The simple graph keeps
//! `z_ij = sign(n_ij + n_ji)·min(|n_ij + n_ji|, 1)`.

mod probe;
mod scan;

use std::collections::{BTreeMap, HashSet};

use rand::Rng;
use rand_distr::weighted::WeightedAliasIndex;
use rand_distr::Distribution;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::levy::WeightMeasure;
use crate::rng::RngStream;
use crate::sample::jumps::HalfPlan;
use crate::sample::{sample_poisson_count, SampleError};

pub use probe::{exchangeability_probe, BlockPermutation, ProbeReport, ProbeStatistic};
pub use scan::{fit_scan, sparsity_scan, ScanPoint, ScanResult};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GraphError {
    #[error("InsufficientWindows: a scan needs at least 3 window sizes, got {0}")]
    InsufficientWindows(usize),
    #[error("DegenerateScan: window α = {0} produced no observed nodes in any replicate")]
    DegenerateScan(f64),
    #[error("BlockMismatch: α = {alpha} is not a multiple of the block width {h}")]
    BlockMismatch { alpha: f64, h: f64 },
    #[error("InfiniteMean: ∫ |w| ρ(dw) must be finite")]
    InfiniteMean,
    #[error("InvalidParameter: {0}")]
    InvalidParameter(String),
    #[error(transparent)]
    Sample(#[from] SampleError),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphConfig {
    pub rho: WeightMeasure,
    pub alpha: f64,
    #[serde(default = "default_eps")]
    pub eps: f64,
    #[serde(default)]
    pub seed: u64,
}

fn default_eps() -> f64 {
    crate::sample::DEFAULT_EPS
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Node {
    pub theta: f64,
    pub w: f64,
}

/// Signed multigraph `D = D_+ − D_-`; `counts[(i, j)] = n_ij` over ordered pairs.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SignedMultigraph {
    pub nodes: Vec<Node>,
    pub counts: BTreeMap<(usize, usize), i64>,
}

/// Simple signed graph; each unordered pair is stored once with `i ≤ j`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SignedGraph {
    pub nodes: Vec<Node>,
    edges: BTreeMap<(usize, usize), i8>,
}

impl SignedGraph {
    pub fn new(nodes: Vec<Node>) -> Self {
        Self {
            nodes,
            edges: BTreeMap::new(),
        }
    }

    pub fn set(&mut self, i: usize, j: usize, z: i8) {
        let key = (i.min(j), i.max(j));
        if z == 0 {
            self.edges.remove(&key);
        } else {
            self.edges.insert(key, z.signum());
        }
    }

    pub fn get(&self, i: usize, j: usize) -> i8 {
        self.edges.get(&(i.min(j), i.max(j))).copied().unwrap_or(0)
    }

    /// Stored pairs `(i, j, z)` with `i ≤ j`.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, i8)> + '_ {
        self.edges.iter().map(|(&(i, j), &z)| (i, j, z))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ObservedCounts {
    pub n_nodes: usize,
    pub n_edges: usize,
}

/// Nodes with at least one incident edge, and unordered pairs (loops included) with `z ≠ 0`.
pub fn count_observed(z: &SignedGraph) -> ObservedCounts {
    let mut seen = HashSet::new();
    let mut n_edges = 0;
    for (i, j, _) in z.edges() {
        seen.insert(i);
        seen.insert(j);
        n_edges += 1;
    }
    ObservedCounts {
        n_nodes: seen.len(),
        n_edges,
    }
}

/// Draws the node set `W` on `[0, α)` for a fixed `ρ`.
#[derive(Debug, Clone)]
pub struct NodeSampler {
    pos: HalfPlan,
    neg: HalfPlan,
}

impl NodeSampler {
    pub fn new(rho: &WeightMeasure, eps: f64) -> Result<Self, GraphError> {
        let (pos, neg) = crate::sample::plan_weight(rho, eps)?;
        Ok(Self { pos, neg })
    }

    pub fn sample<R: Rng + ?Sized>(&self, alpha: f64, rng: &mut R) -> Vec<Node> {
        let mut sizes = Vec::new();
        self.pos.sample(alpha, rng, &mut sizes);
        let n_pos = sizes.len();
        self.neg.sample(alpha, rng, &mut sizes);
        sizes
            .into_iter()
            .enumerate()
            .map(|(i, w)| Node {
                theta: rng.random::<f64>() * alpha,
                w: if i < n_pos { w } else { -w },
            })
            .collect()
    }
}

/// Calls `visit(i, j, sign)` once for every point of `D_+` and `D_-`.
///
/// The points of `D_±` on the same-sign node pairs form a Poisson process of
/// total mass `S_±²`, `S_± = Σ |w_i|` over nodes of that sign, whose points
/// pick `i` and `j` independently with probability `∝ |w|`.
fn for_each_multi_edge<R: Rng + ?Sized>(
    nodes: &[Node],
    rng: &mut R,
    mut visit: impl FnMut(usize, usize, i64),
) {
    for sign in [1i64, -1] {
        let idx: Vec<usize> = (0..nodes.len())
            .filter(|&i| (nodes[i].w > 0.0) == (sign > 0) && nodes[i].w != 0.0)
            .collect();
        if idx.is_empty() {
            continue;
        }
        let weights: Vec<f64> = idx.iter().map(|&i| nodes[i].w.abs()).collect();
        let total: f64 = weights.iter().sum();
        let n = sample_poisson_count(total * total, rng);
        if n == 0 {
            continue;
        }
        let pick = WeightedAliasIndex::new(weights).expect("positive finite weights");
        for _ in 0..n {
            let i = idx[pick.sample(rng)];
            let j = idx[pick.sample(rng)];
            visit(i, j, sign);
        }
    }
}

/// Multigraph and simple graph on a given node set.
pub fn generate_from_nodes<R: Rng + ?Sized>(
    nodes: Vec<Node>,
    rng: &mut R,
) -> (SignedMultigraph, SignedGraph) {
    let mut counts: BTreeMap<(usize, usize), i64> = BTreeMap::new();
    for_each_multi_edge(&nodes, rng, |i, j, s| {
        *counts.entry((i, j)).or_insert(0) += s
    });
    let mut pair_totals: BTreeMap<(usize, usize), i64> = BTreeMap::new();
    for (&(i, j), &n) in &counts {
        *pair_totals.entry((i.min(j), i.max(j))).or_insert(0) += n;
    }
    let mut z = SignedGraph::new(nodes.clone());
    for ((i, j), total) in pair_totals {
        z.set(i, j, total.signum() as i8);
    }
    (SignedMultigraph { nodes, counts }, z)
}

/// Observed node and edge counts without materializing the graph.
pub fn sample_counts<R: Rng + ?Sized>(nodes: &[Node], rng: &mut R) -> ObservedCounts {
    let mut pairs: HashSet<(usize, usize)> = HashSet::new();
    let mut seen: HashSet<usize> = HashSet::new();
    for_each_multi_edge(nodes, rng, |i, j, _| {
        pairs.insert((i.min(j), i.max(j)));
        seen.insert(i);
        seen.insert(j);
    });
    ObservedCounts {
        n_nodes: seen.len(),
        n_edges: pairs.len(),
    }
}

/// Samples `W` on `[0, α)` and the graph it drives.
pub fn generate_graph(cfg: &GraphConfig) -> Result<(SignedMultigraph, SignedGraph), GraphError> {
    if !(cfg.alpha > 0.0 && cfg.alpha.is_finite()) {
        return Err(GraphError::InvalidParameter(format!(
            "window α = {}",
            cfg.alpha
        )));
    }
    let sampler = NodeSampler::new(&cfg.rho, cfg.eps)?;
    let mut rng = RngStream::new(cfg.seed);
    let nodes = sampler.sample(cfg.alpha, &mut rng);
    Ok(generate_from_nodes(nodes, &mut rng))
}
