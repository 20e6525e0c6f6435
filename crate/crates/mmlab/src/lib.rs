//! Library side of the `mmlab` command: configuration, dispatch and report
//! serialization. `main.rs` only parses flags and maps errors to exit codes.

pub mod config;
pub mod report;
pub mod run;

use std::path::PathBuf;

use mmlab_core::LabError;
use thiserror::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;
pub const EXIT_VERIFY_FAILED: i32 = 4;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("cannot read config file {path}: {source}")]
    ConfigRead {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Lab(#[from] LabError),
    #[error("cannot write {path}: {source}")]
    Write {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("verification failed: {failed} of {total} checks did not pass")]
    VerifyFailed { failed: usize, total: usize },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::ConfigRead { .. } => EXIT_INVALID,
            CliError::Lab(LabError::InvalidArgument(_) | LabError::UnsupportedTopology(_)) => EXIT_INVALID,
            CliError::Lab(LabError::NumericalFailure(_)) => EXIT_NUMERICAL,
            CliError::Write { .. } => EXIT_NUMERICAL,
            CliError::VerifyFailed { .. } => EXIT_VERIFY_FAILED,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
