//! Experiment runner behind the `monoapprox` binary.
//!
//! Each subcommand resolves an [`config::ExperimentConfig`] from flags and an
//! optional `key=value` file, runs, and renders a [`report::Report`] as CSV or
//! JSON. Runs are fully determined by the configuration and the master seed.

pub mod commands;
pub mod config;
pub mod report;
pub mod verify;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] monoapprox::Error),
    #[error("usage: {0}")]
    Usage(String),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl CliError {
    /// Process exit status for this error.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Core(monoapprox::Error::Budget { .. }) => 3,
            _ => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
