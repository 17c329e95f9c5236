use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::args::Command;
use crate::error::CliError;
use crate::io;

/// What a subcommand produced, before the manifest is written.
#[derive(Debug, Clone)]
pub struct RunOutput {
    pub out_dir: PathBuf,
    /// Output files relative to `out_dir`.
    pub files: Vec<PathBuf>,
    pub inputs: Vec<PathBuf>,
    pub manifest_path: PathBuf,
    pub metadata: serde_json::Value,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub seed: Option<u64>,
    pub args: Command,
    /// sha256 of each input file, keyed by the path as given.
    pub inputs: BTreeMap<String, String>,
    /// sha256 of each output file, keyed by its path relative to the output location.
    pub outputs: BTreeMap<String, String>,
    #[serde(default)]
    pub metadata: serde_json::Value,
    pub started_at: String,
    pub finished_at: String,
}

pub fn hash_inputs(paths: &[PathBuf]) -> Result<BTreeMap<String, String>, CliError> {
    paths
        .iter()
        .map(|p| Ok((p.display().to_string(), io::sha256_file(p)?)))
        .collect()
}

pub fn hash_outputs(dir: &Path, files: &[PathBuf]) -> Result<BTreeMap<String, String>, CliError> {
    files
        .iter()
        .map(|f| Ok((f.display().to_string(), io::sha256_file(&dir.join(f))?)))
        .collect()
}

pub fn write(cmd: &Command, run: &RunOutput, started_at: String) -> Result<RunManifest, CliError> {
    let manifest = RunManifest {
        tool: env!("CARGO_PKG_NAME").into(),
        version: env!("CARGO_PKG_VERSION").into(),
        command: cmd.name().into(),
        seed: cmd.seed(),
        args: cmd.clone(),
        inputs: hash_inputs(&run.inputs)?,
        outputs: hash_outputs(&run.out_dir, &run.files)?,
        metadata: run.metadata.clone(),
        started_at,
        finished_at: now(),
    };
    io::write_json(&run.manifest_path, &manifest)?;
    Ok(manifest)
}

pub fn now() -> String {
    chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Micros, true)
}
