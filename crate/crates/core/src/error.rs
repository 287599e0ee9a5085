use thiserror::Error;

/// Every failure the solver stack can report.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum SolverError {
    #[error("invalid primitive state: {0}")]
    Domain(String),

    #[error("inadmissible conserved state: D = {d:e}, q = {q:e}")]
    Inadmissible { d: f64, q: f64 },

    #[error("pressure recovery did not converge in {iterations} iterations (residual {residual:e}, p = {pressure:e})")]
    Convergence {
        iterations: usize,
        residual: f64,
        pressure: f64,
    },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("limiter precondition violated at {location}: {detail}")]
    CflViolation { location: String, detail: String },

    #[error("state left the admissible set at {location}: D = {d:e}, q = {q:e}")]
    AdmissibilityLost { location: String, d: f64, q: f64 },

    #[error("degenerate grid: {0}")]
    DegenerateGrid(String),

    #[error("exact Riemann solver failed: {0}")]
    Riemann(String),

    #[error("size mismatch: {0}")]
    SizeMismatch(String),

    #[error("unknown problem `{0}`")]
    UnknownProblem(String),
}

impl SolverError {
    /// Prefixes a location (cell, interface, stage) onto errors that carry one.
    pub fn at(self, location: impl Into<String>) -> Self {
        let location = location.into();
        match self {
            SolverError::Inadmissible { d, q } => SolverError::AdmissibilityLost { location, d, q },
            SolverError::CflViolation { location: inner, detail } => SolverError::CflViolation {
                location: format!("{location}, {inner}"),
                detail,
            },
            SolverError::AdmissibilityLost { location: inner, d, q } => {
                SolverError::AdmissibilityLost {
                    location: format!("{location}, {inner}"),
                    d,
                    q,
                }
            }
            other => other,
        }
    }
}

pub type Result<T, E = SolverError> = std::result::Result<T, E>;
