use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Errors for state validation, linear algebra, and parsing.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not Hermitian (max |M - M'| = {max_deviation:.3e})")]
    NotHermitian { max_deviation: f64 },

    #[error("matrix is not positive semidefinite (min eigenvalue {min_eigenvalue:.3e})")]
    NotPsd { min_eigenvalue: f64 },

    #[error("basis index {index} out of range 1..=4")]
    BadIndex { index: usize },

    #[error("mixture requires two distinct states")]
    SameState,

    #[error("probability {value} outside [0, 1]")]
    BadProbability { value: f64 },

    #[error("state vector is not normalized (norm {norm})")]
    NotNormalized { norm: f64 },

    #[error(
        "rank exceeds 2 (third eigenvalue {third_eigenvalue:.3e} > tolerance {tolerance:.3e})"
    )]
    RankTooHigh {
        third_eigenvalue: f64,
        tolerance: f64,
    },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invariant violation: {0}")]
    InvariantViolation(String),

    #[error("value {value} outside domain [0, 1]")]
    Domain { value: f64 },

    #[error("bad parameter: {0}")]
    BadParameter(String),
}
