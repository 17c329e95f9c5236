use std::path::PathBuf;

use clap::{Args, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

#[derive(Subcommand, Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum Command {
    /// Draw replicates of a CRSM, Skellam or Gaussian random measure spec.
    Simulate(SimulateArgs),
    /// Goodness-of-fit and moment checks on the evaluations written by `simulate`.
    Analyze(AnalyzeArgs),
    /// Conjugate posterior update of a trait prior given observations.
    PosteriorUpdate(PosteriorArgs),
    /// Signed random graphs, sparsity scans and exchangeability probes.
    Graph(GraphArgs),
    /// Re-run the command recorded in a manifest and compare outputs byte for byte.
    Replay(ReplayArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Simulate(_) => "simulate",
            Command::Analyze(_) => "analyze",
            Command::PosteriorUpdate(_) => "posterior-update",
            Command::Graph(_) => "graph",
            Command::Replay(_) => "replay",
        }
    }

    pub fn seed(&self) -> Option<u64> {
        match self {
            Command::Simulate(a) => Some(a.seed),
            Command::Graph(a) => Some(a.seed),
            _ => None,
        }
    }
}

#[derive(Args, Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulateArgs {
    /// Spec JSON: a Lévy spec, `{"skellam": …}` or `{"grm": …}`.
    #[arg(long)]
    pub spec: PathBuf,
    #[arg(long, default_value_t = 1)]
    pub reps: usize,
    /// JSON list of Borel sets, each a list of `[lo, hi]` pairs; defaults to the whole horizon.
    #[arg(long)]
    pub sets: Option<PathBuf>,
    /// Jump-size truncation for infinite-activity weight measures.
    #[arg(long, default_value_t = 1e-6)]
    pub eps: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads; 0 uses every core. Outputs do not depend on it.
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
    /// Output directory.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Args, Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalyzeArgs {
    /// Model file used to generate the draws.
    #[arg(long)]
    pub spec: PathBuf,
    /// Sets file used by `simulate`, if any.
    #[arg(long)]
    pub sets: Option<PathBuf>,
    /// Output directory of a `simulate` run.
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, default_value_t = 0)]
    pub set_id: usize,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Args, Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PosteriorArgs {
    #[arg(long)]
    pub prior: PathBuf,
    #[arg(long)]
    pub likelihood: PathBuf,
    /// JSON Lines, one observation `{"atoms": [{"loc": …, "x": …}]}` per line.
    #[arg(long)]
    pub obs: PathBuf,
    /// Posterior JSON file; the manifest is written next to it.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PermutationKind {
    Identity,
    Reversal,
    Random,
}

#[derive(Args, Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphArgs {
    /// Weight measure ρ as JSON, bare or under a `weight` key.
    #[arg(long)]
    pub spec: PathBuf,
    /// Window sizes α, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    pub alphas: Vec<f64>,
    #[arg(long, default_value_t = 1)]
    pub reps: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 1e-6)]
    pub eps: f64,
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
    #[arg(long)]
    pub out: PathBuf,
    /// Mean node and edge counts per window and the log-log slope.
    #[arg(long, conflicts_with = "probe")]
    pub scan: bool,
    /// Two-sample exchangeability probe on one window.
    #[arg(long)]
    pub probe: bool,
    /// Block width h of the probe; α must be a multiple of it.
    #[arg(long)]
    pub block_width: Option<f64>,
    #[arg(long, value_enum, default_value_t = PermutationKind::Reversal)]
    pub permutation: PermutationKind,
}

#[derive(Args, Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReplayArgs {
    #[arg(long)]
    pub manifest: PathBuf,
    /// Directory for the regenerated outputs; defaults to `replay/` next to the manifest.
    #[arg(long)]
    pub out: Option<PathBuf>,
}
