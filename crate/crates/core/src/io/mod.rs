//! Batch front end: configuration, field output and run orchestration.

pub mod config;
pub mod output;
pub mod run;

use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::error::SolverError;

pub use config::{parse_config, parse_unvalidated, RunConfig};
pub use output::{read_fields, write_fields, SnapshotMeta};
pub use run::{convergence, default_resolutions, properties, run, smooth_study, ConvergenceRow, ConvergenceTable, RunSummary};

/// Failure category of a batch run.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Category {
    Config,
    Solver,
    Io,
}

impl Category {
    pub fn exit_code(self) -> i32 {
        match self {
            Category::Config => 2,
            Category::Solver => 3,
            Category::Io => 4,
        }
    }
}

#[derive(Debug, Error)]
pub enum RunError {
    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Solver(SolverError),

    #[error("{}: {message}", path.display())]
    Io { path: PathBuf, message: String },
}

impl RunError {
    pub fn category(&self) -> Category {
        match self {
            RunError::Config(_) => Category::Config,
            RunError::Solver(_) => Category::Solver,
            RunError::Io { .. } => Category::Io,
        }
    }

    pub(crate) fn io(path: &Path, e: impl std::fmt::Display) -> Self {
        RunError::Io {
            path: path.to_path_buf(),
            message: e.to_string(),
        }
    }
}

impl From<SolverError> for RunError {
    fn from(e: SolverError) -> Self {
        match e {
            SolverError::Config(m) => RunError::Config(m),
            SolverError::UnknownProblem(_) => RunError::Config(e.to_string()),
            other => RunError::Solver(other),
        }
    }
}
