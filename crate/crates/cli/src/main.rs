use std::process::ExitCode;

use clap::{Parser, Subcommand};

use mzi_cli::{run, CliError, CommandKind, RunArgs};

/// Interferometer g²(φ) sweeps, pulse ensembles, consistency audits and sequence export.
#[derive(Debug, Parser)]
#[command(name = "mzi", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Closed-form or bandwidth-averaged g²(φ) over the phase grid.
    Sweep(RunArgs),
    /// g²(φ) averaged over a generated pulse sequence.
    Ensemble(RunArgs),
    /// Cross-check the field, intensity and matrix layers on the default grid.
    Audit(RunArgs),
    /// Export the pulse sequence.
    Sequence(RunArgs),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (kind, args) = match cli.command {
        Command::Sweep(a) => (CommandKind::Sweep, a),
        Command::Ensemble(a) => (CommandKind::Ensemble, a),
        Command::Audit(a) => (CommandKind::Audit, a),
        Command::Sequence(a) => (CommandKind::Sequence, a),
    };
    let result = args
        .resolve()
        .map_err(CliError::from)
        .and_then(|cfg| run(kind, &cfg));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
