//! Error type of the command-line layer.

use std::io;
use std::path::PathBuf;

use reslab_core::CoreError;
use thiserror::Error;

/// Result alias for the std companion crate.
pub type Result<T> = std::result::Result<T, AppError>;

/// Failures of the command layer. Every variant maps to exit code 2
/// (usage/config error); failed checks are not errors but reports.
#[derive(Debug, Error)]
pub enum AppError {
    /// A malformed flag value or an unknown suite/subcommand argument.
    #[error("usage: {0}")]
    Usage(String),
    /// A configuration file or symbol spec that fails validation.
    #[error("config: {0}")]
    Config(String),
    /// A numerical failure from the core (pole proximity, cut hits, …).
    #[error("numerics: {0}")]
    Core(#[from] CoreError),
    /// Filesystem failure with the offending path.
    #[error("io error on {path}: {source}")]
    Io {
        /// Path that was read or written.
        path: PathBuf,
        /// Underlying error.
        source: io::Error,
    },
    /// JSON (de)serialisation failure.
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    /// CSV serialisation failure.
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    /// The worker pool could not be built.
    #[error("thread pool: {0}")]
    ThreadPool(#[from] rayon::ThreadPoolBuildError),
}

impl AppError {
    /// Wrap an IO error with its path.
    pub fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        AppError::Io { path: path.into(), source }
    }

    /// Process exit code for this error.
    pub fn exit_code(&self) -> i32 {
        2
    }
}
