use std::path::PathBuf;

use thiserror::Error;

/// Exit code for a successful run with a compatible verdict.
pub const EXIT_OK: i32 = 0;
/// Exit code for usage, parse, I/O and numerical errors.
pub const EXIT_ERROR: i32 = 1;
/// Exit code for an incompatible verdict or a flagged curve.
pub const EXIT_INCOMPATIBLE: i32 = 2;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("scenario: {0}")]
    Scenario(String),
    #[error("point #{index}: {source}")]
    Point {
        index: usize,
        source: weylkit_core::Error,
    },
    #[error("geodesic #{index}: {source}")]
    Geodesic {
        index: usize,
        source: weylkit_core::Error,
    },
    #[error(transparent)]
    Core(#[from] weylkit_core::Error),
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(weylkit_core::Error::Incompatible { .. }) => EXIT_INCOMPATIBLE,
            _ => EXIT_ERROR,
        }
    }
}
