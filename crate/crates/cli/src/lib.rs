//! Experiment runner for the squeezesim pipeline: configuration, ε
//! sweeps, the invariant suite and run-directory artifacts.

pub mod config;
pub mod experiment;
pub mod output;
pub mod verify;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("post-selection kept no shots at ε = {0}")]
    DegeneratePostSelection(f64),
    #[error(transparent)]
    Core(#[from] squeezesim::Error),
    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Verification(_) => 3,
            CliError::DegeneratePostSelection(_) => 4,
            CliError::Core(squeezesim::Error::DegeneratePostSelection) => 4,
            CliError::Core(squeezesim::Error::InvalidParams(_)) => 2,
            CliError::Core(_) | CliError::Io { .. } => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
