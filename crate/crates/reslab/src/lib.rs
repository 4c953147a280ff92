//! Std companion of `reslab-core`: a rayon executor, run configuration,
//! JSON/CSV reports with atomic writes, the verification suites and the
//! `reslab` command-line tool.

#![warn(missing_docs)]

pub mod cli;
pub mod commands;
pub mod config;
pub mod error;
pub mod exec;
pub mod format;
pub mod grids;
pub mod report;
pub mod suites;
pub mod tolerances;

pub use error::{AppError, Result};
