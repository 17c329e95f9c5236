use std::path::{Path, PathBuf};

use crate::args::{Command, ReplayArgs};
use crate::error::CliError;
use crate::io;
use crate::manifest::{self, RunManifest, RunOutput};

/// The recorded command with its output location moved under `dir`.
fn redirect(cmd: &Command, dir: &Path) -> Result<Command, CliError> {
    let mut cmd = cmd.clone();
    match &mut cmd {
        Command::Simulate(a) => a.out = dir.to_path_buf(),
        Command::Analyze(a) => a.out = dir.to_path_buf(),
        Command::Graph(a) => a.out = dir.to_path_buf(),
        Command::PosteriorUpdate(a) => {
            let name = a
                .out
                .file_name()
                .map(PathBuf::from)
                .unwrap_or_else(|| "posterior.json".into());
            a.out = dir.join(name);
        }
        Command::Replay(_) => return Err(CliError::usage("a replay manifest cannot be replayed")),
    }
    Ok(cmd)
}

pub fn run(
    args: &ReplayArgs,
    dispatch: impl Fn(&Command) -> Result<RunOutput, CliError>,
) -> Result<RunOutput, CliError> {
    let recorded: RunManifest = io::read_json(&args.manifest)?;
    for (path, hash) in &recorded.inputs {
        let now = io::sha256_file(Path::new(path))?;
        if &now != hash {
            return Err(CliError::Replay(format!(
                "input {path} changed: {hash} → {now}"
            )));
        }
    }
    let dir = match &args.out {
        Some(d) => d.clone(),
        None => args
            .manifest
            .parent()
            .unwrap_or(Path::new("."))
            .join("replay"),
    };
    io::create_dir(&dir)?;
    let cmd = redirect(&recorded.args, &dir)?;
    let started = manifest::now();
    let out = dispatch(&cmd)?;
    let fresh = manifest::write(&cmd, &out, started)?;
    if fresh.outputs != recorded.outputs {
        let differing: Vec<&String> = recorded
            .outputs
            .iter()
            .filter(|(k, v)| fresh.outputs.get(*k) != Some(v))
            .map(|(k, _)| k)
            .chain(
                fresh
                    .outputs
                    .keys()
                    .filter(|k| !recorded.outputs.contains_key(*k)),
            )
            .collect();
        return Err(CliError::Replay(format!("outputs differ: {differing:?}")));
    }
    log::info!(
        "replay of {} reproduced {} outputs",
        recorded.command,
        fresh.outputs.len()
    );
    Ok(out)
}
