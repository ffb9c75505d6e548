use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("characteristic polynomial mismatch: expected {expected}, found {found}")]
    CharPolyMismatch { expected: String, found: String },

    #[error("kernel rank {found} does not match expected multiplicity {expected}")]
    RankError { expected: usize, found: usize },

    #[error("matrix is not unipotent (characteristic polynomial {0})")]
    NotUnipotent(String),

    #[error("input vectors are linearly dependent")]
    DependentVectors,

    #[error("multiplicity of eigenvalue -1 must be even for determinant one, got b = {0}")]
    OddB(usize),

    #[error("estimated work {estimated} exceeds limit {limit}")]
    WorkLimitExceeded { estimated: String, limit: String },

    #[error("need at least 3 points with strictly increasing height, got {0}")]
    InsufficientPoints(usize),

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("internal error: {0}")]
    Internal(String),
}
