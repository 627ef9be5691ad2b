use thiserror::Error;

/// Errors raised by the regularization toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("grid mismatch: {0}")]
    GridMismatch(String),
    #[error("non-finite value at index {index}")]
    NonFinite { index: usize },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("zero pivot at row {row} of tridiagonal system")]
    Singular { row: usize },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error("inadmissible coefficient: {0}")]
    Inadmissible(String),
    #[error("subgradient precondition violated: Bregman distance {0:e} < 0")]
    SubgradientViolation(f64),
    #[error("bracket for inverse exceeded {0} doublings")]
    Unbounded(usize),
    #[error("solver diverged at alpha = {alpha:e} after {iters} iterations")]
    Divergence { alpha: f64, iters: usize },
    #[error("path aborted after {completed} records: {source}")]
    PathAborted {
        completed: usize,
        #[source]
        source: Box<Error>,
    },
    #[error("empty path")]
    EmptyPath,
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("invalid configuration:\n  {}", .0.join("\n  "))]
    Config(Vec<String>),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    /// True when the error came out of an iterative solve rather than bad input.
    pub fn is_divergence(&self) -> bool {
        match self {
            Error::Divergence { .. } => true,
            Error::PathAborted { source, .. } => source.is_divergence(),
            _ => false,
        }
    }
}
