use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{generate_from_nodes, GraphError, NodeSampler, SignedGraph};
use crate::levy::WeightMeasure;
use crate::rng::RngStream;
use crate::stats::ks_two_sample;

/// Permutation of the blocks `A_1, …, A_J` applied to both axes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BlockPermutation {
    Identity,
    Reversal,
    Explicit(Vec<usize>),
}

impl BlockPermutation {
    pub fn random<R: Rng + ?Sized>(blocks: usize, rng: &mut R) -> Self {
        let mut p: Vec<usize> = (0..blocks).collect();
        p.shuffle(rng);
        BlockPermutation::Explicit(p)
    }

    pub fn indices(&self, blocks: usize) -> Result<Vec<usize>, GraphError> {
        let p = match self {
            BlockPermutation::Identity => (0..blocks).collect(),
            BlockPermutation::Reversal => (0..blocks).rev().collect(),
            BlockPermutation::Explicit(p) => p.clone(),
        };
        let mut sorted = p.clone();
        sorted.sort_unstable();
        if sorted != (0..blocks).collect::<Vec<_>>() {
            return Err(GraphError::InvalidParameter(format!(
                "{p:?} is not a permutation of {blocks} blocks"
            )));
        }
        Ok(p)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbeStatistic {
    pub name: String,
    pub ks_distance: f64,
    pub p_value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbeReport {
    pub blocks: usize,
    pub permutation: Vec<usize>,
    pub reps: usize,
    pub statistics: Vec<ProbeStatistic>,
}

pub const PROBE_STATISTICS: [&str; 3] = ["positive_mass", "negative_mass", "off_diagonal_sum"];

/// `Z_+` and `Z_-` masses of the block squares `A_a × A_b`, both orders counted.
fn block_masses(z: &SignedGraph, h: f64, blocks: usize) -> (Vec<Vec<f64>>, Vec<Vec<f64>>) {
    let mut pos = vec![vec![0.0; blocks]; blocks];
    let mut neg = vec![vec![0.0; blocks]; blocks];
    let block = |theta: f64| ((theta / h) as usize).min(blocks - 1);
    for (i, j, s) in z.edges() {
        let (a, b) = (block(z.nodes[i].theta), block(z.nodes[j].theta));
        let target = if s > 0 { &mut pos } else { &mut neg };
        target[a][b] += 1.0;
        if i != j {
            target[b][a] += 1.0;
        }
    }
    (pos, neg)
}

/// Summaries over the leading quarter `{a, b < ⌈J/2⌉}` of the permuted block matrix.
fn summaries(pos: &[Vec<f64>], neg: &[Vec<f64>], perm: &[usize]) -> [f64; 3] {
    let half = perm.len().div_ceil(2);
    let mut out = [0.0; 3];
    for a in 0..half {
        for b in 0..half {
            let (pa, pb) = (perm[a], perm[b]);
            out[0] += pos[pa][pb];
            out[1] += neg[pa][pb];
            if a != b {
                out[2] += pos[pa][pb] - neg[pa][pb];
            }
        }
    }
    out
}

/// Two-sample comparison of block summaries of graphs on `[0, α)` against the
/// same summaries after permuting the blocks `A_j = [h(j−1), hj)` of
/// independently generated graphs. Each summary reads only the leading
/// quarter of the block matrix, so a permutation moves it onto other blocks.
pub fn exchangeability_probe(
    rho: &WeightMeasure,
    alpha: f64,
    h: f64,
    permutation: &BlockPermutation,
    reps: usize,
    seed: u64,
    eps: f64,
) -> Result<ProbeReport, GraphError> {
    let ratio = alpha / h;
    if !(h > 0.0 && ratio >= 1.0 && (ratio - ratio.round()).abs() < 1e-9) {
        return Err(GraphError::BlockMismatch { alpha, h });
    }
    let blocks = ratio.round() as usize;
    let perm = permutation.indices(blocks)?;
    let identity: Vec<usize> = (0..blocks).collect();
    let sampler = NodeSampler::new(rho, eps)?;
    let root = RngStream::new(seed);
    let mut samples = [
        vec![Vec::with_capacity(reps); 3],
        vec![Vec::with_capacity(reps); 3],
    ];
    for (arm, p) in [&identity, &perm].into_iter().enumerate() {
        for r in 0..reps {
            let mut rng = root.split_path(&[arm as u64, r as u64]);
            let nodes = sampler.sample(alpha, &mut rng);
            let (_, z) = generate_from_nodes(nodes, &mut rng);
            let (pos, neg) = block_masses(&z, h, blocks);
            for (k, v) in summaries(&pos, &neg, p).into_iter().enumerate() {
                samples[arm][k].push(v);
            }
        }
    }
    let statistics = PROBE_STATISTICS
        .iter()
        .enumerate()
        .map(|(k, name)| {
            let t = ks_two_sample(&samples[0][k], &samples[1][k]);
            ProbeStatistic {
                name: name.to_string(),
                ks_distance: t.distance,
                p_value: t.p_value,
            }
        })
        .collect();
    Ok(ProbeReport {
        blocks,
        permutation: perm,
        reps,
        statistics,
    })
}
