//! Orchestration for the chordal cubic fourfold toolkit: configuration,
//! parallel drivers, the file formats, and the verification suites.

pub mod commands;
pub mod config;
pub mod fit;
pub mod output;
pub mod parallel;
pub mod suites;

use chordal_core::Error as CoreError;

/// A command failure, split by exit code.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Bad flags or input files; exit code 2.
    #[error("{0}")]
    Usage(String),
    /// A mathematical or verification failure; exit code 1.
    #[error("{0}")]
    Failure(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Failure(_) | CliError::Io(_) => 1,
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::Usage(_) | CoreError::Domain(_) | CoreError::Refused(_) => CliError::Usage(e.to_string()),
            CoreError::Precondition(_) | CoreError::Inconsistent(_) | CoreError::Overflow(_) => {
                CliError::Failure(e.to_string())
            }
        }
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Failure(format!("csv error: {e}"))
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Failure(format!("json error: {e}"))
    }
}

pub type Result<T, E = CliError> = std::result::Result<T, E>;
