//! Command-line front end: argument handling, commands and file output.

pub mod commands;
pub mod config;
pub mod output;
pub mod svg;

use thiserror::Error;

pub use config::{Cli, Command, RunConfig};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Numerical(String),
    #[error("cannot write {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

impl CliError {
    /// Process exit code: 1 for bad input, 2 for numerical or topology failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Io { .. } => 1,
            CliError::Numerical(_) => 2,
        }
    }
}

pub fn run(cli: &Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Simulate(a) => commands::simulate(a),
        Command::Periodic(a) => commands::periodic(a),
        Command::Topology(a) => commands::topology(a),
    }
}
