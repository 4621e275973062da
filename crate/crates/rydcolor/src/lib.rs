//! Configuration, reports and run orchestration for the `rydcolor` binary.

use std::path::PathBuf;

pub mod config;
pub mod report;
pub mod runner;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("{path}: {source}", path = .0.display(), source = .1)]
    Io(PathBuf, #[source] std::io::Error),
    #[error("output error: {0}")]
    Output(String),
    #[error(transparent)]
    Core(#[from] rydcolor_core::Error),
}

impl CliError {
    /// Process exit code: 2 for bad input, 1 for everything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Core(_) => 2,
            CliError::Io(..) | CliError::Output(_) => 1,
        }
    }
}
