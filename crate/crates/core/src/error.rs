use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("moment order {order} exceeds the configured cap {cap}")]
    OrderExceeded { order: usize, cap: usize },

    #[error("invalid entry law: {0}")]
    InvalidSpec(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("permutation does not commute with the transpose at ({row}, {col}) (1-based)")]
    Asymmetric { row: usize, col: usize },

    #[error("permutation is not a bijection: {0}")]
    NotBijective(String),

    #[error("{what}: work estimate {needed:.3e} exceeds budget {cap:.3e}")]
    BudgetExceeded {
        what: &'static str,
        needed: f64,
        cap: f64,
    },

    #[error("matrix is not Hermitian (max deviation {0:.3e})")]
    NotHermitian(f64),

    #[error("eigensolver failed to converge")]
    NoConvergence,

    #[error("empty sample")]
    EmptySample,

    #[error("invalid histogram: {0}")]
    InvalidHistogram(String),

    #[error("invalid test graph: {0}")]
    InvalidGraph(String),

    #[error("invalid covariance: {0}")]
    InvalidCovariance(String),

    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
