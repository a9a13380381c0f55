use thiserror::Error;

/// Errors produced by the estimation, simulation and experiment layers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid specification: {0}")]
    InvalidSpec(String),

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    #[error("invalid window: {0}")]
    InvalidWindow(String),

    #[error("invalid breakpoints: {0}")]
    InvalidBreakpoints(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not symmetric (max asymmetry {0:e})")]
    NotSymmetric(f64),

    #[error("matrix is not positive semidefinite (min eigenvalue {0:e})")]
    NotPositiveSemidefinite(f64),

    #[error("fixed-point solver did not converge after {iterations} iterations (residual {residual:e})")]
    Convergence { iterations: usize, residual: f64 },

    #[error("ingestion failed: {0}")]
    Ingestion(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

/// Coarse classification used by front ends to pick exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    Config,
    Numerical,
    Io,
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        match self {
            Error::InvalidSpec(_)
            | Error::InvalidWindow(_)
            | Error::InvalidBreakpoints(_)
            | Error::Unsupported(_)
            | Error::Config(_)
            | Error::Json(_) => ErrorClass::Config,
            Error::InsufficientData(_)
            | Error::DegenerateInput(_)
            | Error::DimensionMismatch { .. }
            | Error::NotSymmetric(_)
            | Error::NotPositiveSemidefinite(_)
            | Error::Convergence { .. } => ErrorClass::Numerical,
            Error::Ingestion(_) | Error::Io(_) | Error::Csv(_) => ErrorClass::Io,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
