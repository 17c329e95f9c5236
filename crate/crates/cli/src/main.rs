mod analyze;
mod args;
mod error;
mod graph;
mod io;
mod manifest;
mod posterior;
mod replay;
mod simulate;

use std::process::ExitCode;

use clap::Parser;

use args::Command;
use error::CliError;
use manifest::RunOutput;

const EXIT_CODES: &str = "\
Exit codes:
  0  success
  1  I/O or numerical runtime failure
  2  invalid arguments or spec validation failure
  3  truncation too coarse for the requested eps
  4  posterior assumption violated
  5  graph scan or probe failure
  6  replay produced different outputs

Set SIGNED_MEASURES_LOG (e.g. info, debug) to control logging on stderr.";

#[derive(Parser, Debug)]
#[command(name = "signed-measures", version, about = "Simulate and analyze random signed measures", after_help = EXIT_CODES)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

fn dispatch(cmd: &Command) -> Result<RunOutput, CliError> {
    match cmd {
        Command::Simulate(a) => simulate::run(a),
        Command::Analyze(a) => analyze::run(a),
        Command::PosteriorUpdate(a) => posterior::run(a),
        Command::Graph(a) => graph::run(a),
        Command::Replay(a) => replay::run(a, dispatch),
    }
}

fn execute(cmd: &Command) -> Result<(), CliError> {
    if let Command::Replay(a) = cmd {
        replay::run(a, dispatch)?;
        return Ok(());
    }
    let started = manifest::now();
    let out = dispatch(cmd)?;
    manifest::write(cmd, &out, started)?;
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("SIGNED_MEASURES_LOG", "warn"))
        .init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if e.use_stderr() => {
            eprint!("InvalidArguments: {e}");
            return ExitCode::from(2);
        }
        Err(e) => {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
    };
    match execute(&cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit_code())
        }
    }
}
