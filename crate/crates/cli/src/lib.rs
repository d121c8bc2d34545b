//! Library side of the `qvrp` binary: command implementations, report
//! bundles and SVG rendering, kept out of `main` so tests can drive them.

pub mod commands;
pub mod files;
pub mod plot;
pub mod report;

use std::path::PathBuf;

use qvrp_core::optimize::OptimizeError;
use qvrp_core::qubo::io::QuboFormatError;
use qvrp_core::qubo::QuboError;
use qvrp_core::vrptw::io::FormatError;
use qvrp_core::vrptw::RouteSetError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{}: {source}", path.display())]
    Instance { path: PathBuf, source: FormatError },
    #[error("{}: {source}", path.display())]
    QuboFile {
        path: PathBuf,
        source: QuboFormatError,
    },
    #[error("{}: {source}", path.display())]
    Csv { path: PathBuf, source: csv::Error },
    #[error("{}: {source}", path.display())]
    Json {
        path: PathBuf,
        source: serde_json::Error,
    },
    #[error("{}: unsupported or missing schema_version (expected {expected})", path.display())]
    Schema { path: PathBuf, expected: u32 },
    #[error("{}: contains no data rows", path.display())]
    Empty { path: PathBuf },
    #[error("{}: {message}", path.display())]
    Invalid { path: PathBuf, message: String },
    #[error(transparent)]
    RouteSet(#[from] RouteSetError),
    #[error(transparent)]
    Qubo(#[from] QuboError),
    #[error(transparent)]
    Optimize(#[from] OptimizeError),
    #[error("{0}")]
    Usage(String),
}
