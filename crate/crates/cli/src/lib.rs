//! Command-line driver: configuration parsing, command dispatch and result files.

pub mod commands;
pub mod config;

use std::path::PathBuf;

use thiserror::Error;

pub use commands::{run_command, Outcome};
pub use config::{parse_config, Command, RunConfig};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Scenario(#[from] jamnet_core::Error),

    #[error("cannot write {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    /// Process exit status for this error.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Scenario(e) if e.is_solver_failure() => 2,
            _ => 1,
        }
    }
}
