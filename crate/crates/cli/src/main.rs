// SPDX-License-Identifier: Apache-2.0

//! `redfield-lab <subcommand> --config <path.json> [--output <path>]`

mod commands;
mod config;
mod error;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use crate::config::Mode;
use crate::error::CliError;

#[derive(Parser)]
#[command(
    name = "redfield-lab",
    version,
    about = "Redfield qubit and qubit-ancilla simulations"
)]
struct Args {
    #[arg(value_enum)]
    mode: Mode,
    /// JSON run configuration.
    #[arg(long)]
    config: PathBuf,
    /// Output file; overrides `output.path`. Defaults to stdout.
    #[arg(long)]
    output: Option<PathBuf>,
}

fn execute(args: &Args) -> Result<(), CliError> {
    let text = std::fs::read_to_string(&args.config)
        .map_err(|e| CliError::config("--config", format!("{}: {e}", args.config.display())))?;
    let cfg = config::parse(&text)?;
    let bytes = commands::run(args.mode, &cfg)?;
    let path = args.output.clone().or_else(|| cfg.output_path());
    output::write(path.as_deref(), &bytes)
}

fn main() -> ExitCode {
    let args = Args::parse();
    match execute(&args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("redfield-lab: {e}");
            ExitCode::from(e.code())
        }
    }
}
