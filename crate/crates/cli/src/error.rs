use std::fmt::Display;
use std::path::Path;

use signed_measures::bnp::BnpError;
use signed_measures::graph::GraphError;
use signed_measures::levy::LevyError;
use signed_measures::sample::SampleError;
use thiserror::Error;

/// Failure of a subcommand. Every message starts with the error-kind token.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Runtime(String),
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Truncation(String),
    #[error("{0}")]
    Assumption(String),
    #[error("{0}")]
    Graph(String),
    #[error("ReplayMismatch: {0}")]
    Replay(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Runtime(_) => 1,
            CliError::Input(_) => 2,
            CliError::Truncation(_) => 3,
            CliError::Assumption(_) => 4,
            CliError::Graph(_) => 5,
            CliError::Replay(_) => 6,
        }
    }

    pub fn io(path: &Path, e: impl Display) -> Self {
        CliError::Runtime(format!("IoError: {}: {e}", path.display()))
    }

    pub fn spec(path: &Path, e: impl Display) -> Self {
        CliError::Input(format!("SpecValidation: {}: {e}", path.display()))
    }

    pub fn usage(msg: impl Display) -> Self {
        CliError::Input(format!("InvalidArguments: {msg}"))
    }
}

impl From<LevyError> for CliError {
    fn from(e: LevyError) -> Self {
        match e {
            LevyError::Quadrature(_) => CliError::Runtime(e.to_string()),
            _ => CliError::Input(e.to_string()),
        }
    }
}

impl From<SampleError> for CliError {
    fn from(e: SampleError) -> Self {
        match e {
            SampleError::TruncationTooCoarse { .. } => CliError::Truncation(e.to_string()),
            SampleError::Levy(l) => l.into(),
            _ => CliError::Input(e.to_string()),
        }
    }
}

impl From<BnpError> for CliError {
    fn from(e: BnpError) -> Self {
        match e {
            BnpError::AssumptionViolated { .. } | BnpError::UnmatchedLikelihood(_) => {
                CliError::Assumption(e.to_string())
            }
            BnpError::Levy(l) => l.into(),
            BnpError::Sample(s) => s.into(),
            _ => CliError::Input(e.to_string()),
        }
    }
}

impl From<GraphError> for CliError {
    fn from(e: GraphError) -> Self {
        match e {
            GraphError::Sample(s) => s.into(),
            GraphError::InvalidParameter(_) => CliError::Input(e.to_string()),
            _ => CliError::Graph(e.to_string()),
        }
    }
}
