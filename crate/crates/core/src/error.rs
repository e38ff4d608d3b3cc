use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is not square: {0}x{1}")]
    NotSquare(usize, usize),

    #[error("matrix is not Hermitian (max deviation {0:.3e})")]
    NotHermitian(f64),

    #[error("trace is not 1 (got {0})")]
    InvalidTrace(f64),

    #[error("matrix is not positive semidefinite (min eigenvalue {0:.3e})")]
    NotPositive(f64),

    #[error("vector is not normalized (norm {0})")]
    NotNormalized(f64),

    #[error("index {index} out of range {range}")]
    IndexOutOfRange { index: usize, range: String },

    #[error("parameter out of range: {0}")]
    ParameterOutOfRange(String),

    #[error("expected {expected} parameters, got {got}")]
    WrongParameterCount { expected: usize, got: usize },

    #[error("eigensolver did not converge after {0} sweeps")]
    NoConvergence(usize),

    #[error("probabilities sum to {0}, expected 1")]
    InvalidProbabilities(f64),

    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
