use std::io;
use std::path::PathBuf;

use thiserror::Error;

/// Process exit codes.
pub mod exit {
    pub const OK: u8 = 0;
    pub const TOLERANCE: u8 = 1;
    pub const INVALID: u8 = 2;
    pub const SOLVER: u8 = 3;
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] landau_core::Error),

    #[error("invalid parameters: {0}")]
    Invalid(String),

    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },

    #[error("{0}")]
    Tolerance(String),

    #[error("{0}")]
    Solver(String),

    #[error("worker pool: {0}")]
    Pool(#[from] rayon::ThreadPoolBuildError),
}

impl CliError {
    pub fn io(path: impl Into<PathBuf>) -> impl FnOnce(io::Error) -> Self {
        let path = path.into();
        move |source| CliError::Io { path, source }
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(e) if e.is_invalid_input() => exit::INVALID,
            CliError::Invalid(_) => exit::INVALID,
            CliError::Tolerance(_) => exit::TOLERANCE,
            CliError::Core(_) | CliError::Solver(_) | CliError::Io { .. } | CliError::Pool(_) => {
                exit::SOLVER
            }
        }
    }
}

pub type Result<T, E = CliError> = std::result::Result<T, E>;
