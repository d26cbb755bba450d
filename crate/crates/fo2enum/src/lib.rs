//! Command-line front end for `fo2enum-core`: model streams in ndjson or
//! text, counting, configuration queries and a delay benchmark.

pub mod bench;
pub mod cli;
pub mod io;

use std::process::ExitCode;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Parse(String),
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Io(#[from] std::io::Error),
    #[error("internal check failed: {0}")]
    Invariant(String),
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        match self {
            CliError::Parse(_) | CliError::Usage(_) => ExitCode::from(2),
            CliError::Io(_) => ExitCode::from(3),
            CliError::Invariant(_) => ExitCode::from(1),
        }
    }
}
