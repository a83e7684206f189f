//! Experiment drivers behind the `cantorflip` binary.
//!
//! Each `cmd_*` function takes fully resolved inputs and returns a
//! serializable report; [`output`] turns reports into JSON or CSV.

pub mod commands;
pub mod config;
pub mod output;

use std::io;
use std::path::PathBuf;

use thiserror::Error;

pub use commands::*;
pub use config::{DeterministicConfig, ExperimentConfig, Mode};

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] cantorflip::Error),

    #[error("{0}")]
    Usage(String),

    #[error("cannot read config {path}: {source}")]
    ConfigRead { path: PathBuf, source: io::Error },

    #[error("invalid config {path}: {source}")]
    ConfigParse { path: PathBuf, source: serde_json::Error },

    #[error("cannot write {path}: {source}")]
    Write { path: PathBuf, source: io::Error },
}

impl CliError {
    /// 0 success, 2 invalid input, 3 size/work budget, 1 anything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(e) if e.is_budget() => 3,
            CliError::Core(_) | CliError::Usage(_) | CliError::ConfigRead { .. } | CliError::ConfigParse { .. } => 2,
            CliError::Write { .. } => 1,
        }
    }
}

pub type Result<T, E = CliError> = std::result::Result<T, E>;
