use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter `{field}`: {reason}")]
    InvalidParam { field: &'static str, reason: String },

    #[error("index {index} out of range (valid: {lo}..={hi})")]
    IndexOutOfRange { index: usize, lo: usize, hi: usize },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("singular transfer matrix: {0} must be nonzero")]
    SingularParameter(&'static str),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("eigensolver did not converge{}", .index.map(|i| format!(" (eigenpair {i})")).unwrap_or_default())]
    NoConvergence { index: Option<usize> },

    #[error("eigenpair {index}: residual {residual:.3e} exceeds bound {bound:.3e}")]
    ResidualViolation { index: usize, residual: f64, bound: f64 },

    #[error("transfer-matrix product overflowed at step {step}; increase the rescale frequency")]
    Overflow { step: usize },

    #[error("ring tracer: root assembly discontinuity near phi = {phi:.6}")]
    TracerDiscontinuity { phi: f64 },

    #[error("lookup failed: {0}")]
    Lookup(String),

    #[error("{path}:{line}: {message}")]
    Parse { path: String, line: u64, message: String },

    #[error("config: {0}")]
    Config(String),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn param(field: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParam { field, reason: reason.into() }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io { path: path.into(), source }
    }

    /// Whether the failure is numerical (solver, overflow, tracer) rather than
    /// bad input or I/O.
    pub fn is_numeric(&self) -> bool {
        matches!(
            self,
            Error::NoConvergence { .. }
                | Error::ResidualViolation { .. }
                | Error::Overflow { .. }
                | Error::TracerDiscontinuity { .. }
        )
    }

    pub fn is_io(&self) -> bool {
        matches!(self, Error::Io { .. } | Error::Parse { .. } | Error::Json(_))
    }
}
