//! `adiasearch` command-line front end.
//!
//! Exit codes: 0 success, 1 configuration error, 2 I/O error, 3 numerical
//! failure.

mod commands;
mod config;
mod output;

use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;
use thiserror::Error;

use config::{Cli, Command};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error("{0}")]
    Io(String),
    #[error("{0}")]
    Numerical(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 1,
            CliError::Io(_) => 2,
            CliError::Numerical(_) => 3,
        }
    }
}

impl From<adiasearch::Error> for CliError {
    fn from(e: adiasearch::Error) -> Self {
        match e {
            adiasearch::Error::Domain(_) | adiasearch::Error::Size(_) => {
                CliError::Config(e.to_string())
            }
            _ => CliError::Numerical(e.to_string()),
        }
    }
}

fn output_path(command: &Command) -> Option<&std::path::Path> {
    match command {
        Command::GapCurve { out, .. }
        | Command::Schedule { out, .. }
        | Command::Evolve { out, .. }
        | Command::Sweep { out, .. }
        | Command::Lowerbound { out, .. } => out.output.as_deref(),
    }
}

fn execute(cli: &Cli) -> Result<(), CliError> {
    let config = config::validate(&cli.command)?;
    let content = commands::run(&cli.command, &config)?;
    output::emit(output_path(&cli.command), &content)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => match e.kind() {
            ErrorKind::DisplayHelp
            | ErrorKind::DisplayVersion
            | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            _ => {
                let rendered = e.to_string();
                let line = rendered.lines().next().unwrap_or("invalid arguments");
                eprintln!("{}", line.trim());
                return ExitCode::from(1);
            }
        },
    };
    match execute(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
