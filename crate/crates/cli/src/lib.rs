//! Command-line front end for the bandwidth-broker simulator: config
//! loading, experiment orchestration, CSV emission and chart rendering.

pub mod commands;
pub mod config;
pub mod output;
pub mod report;
pub mod svg;

use std::io;
use std::path::PathBuf;

use bbsim_core::{ConfigError, SimError};

/// Exit code for usage and configuration errors.
pub const EXIT_USAGE: i32 = 1;
/// Exit code for I/O errors while writing results.
pub const EXIT_IO: i32 = 2;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Bad flags or flag values (malformed ranges and the like).
    #[error("{0}")]
    Usage(String),
    /// The config file could not be read.
    #[error("cannot read config {path}: {source}")]
    ConfigRead { path: PathBuf, source: io::Error },
    /// The config file is not valid JSON for the schema.
    #[error("invalid config {path}: {source}")]
    ConfigParse {
        path: PathBuf,
        source: serde_json::Error,
    },
    /// The config parsed but violates its invariants.
    #[error(transparent)]
    ConfigInvalid(#[from] ConfigError),
    /// An input data file (sweep CSV) is missing or malformed.
    #[error("{0}")]
    InputData(String),
    /// Writing an output file failed.
    #[error("cannot write {path}: {source}")]
    OutputIo { path: PathBuf, source: io::Error },
    #[error(transparent)]
    Sim(#[from] SimError),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::OutputIo { .. } => EXIT_IO,
            _ => EXIT_USAGE,
        }
    }
}
