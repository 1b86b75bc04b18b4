use thiserror::Error;

/// Errors produced anywhere in the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("configuration error: {0}")]
    Config(String),

    #[error("rank mismatch: expected {expected}, got {got}")]
    RankMismatch { expected: usize, got: usize },

    #[error("weight {weight} is not dominant integral")]
    NotDominant { weight: String },

    #[error("highest weight {weight} is not regular")]
    NotRegular { weight: String },

    #[error("hypothesis violated: {0}")]
    Hypothesis(String),

    #[error("matrix is not positive definite: {0}")]
    NotPositiveDefinite(String),

    #[error("internal consistency failure: {0}")]
    Internal(String),

    #[error("weight support of {size} entries exceeds the cap of {cap}")]
    SupportCap { size: usize, cap: usize },

    #[error("size cap exceeded: {0}")]
    SizeCap(String),

    #[error("grid too small on axis {axis}: have {have} points, need at least {need}")]
    GridTooSmall { axis: usize, have: u64, need: u64 },

    #[error("integrand magnitude e^{log_magnitude:.1} exceeds the floating range cap e^{cap:.1}")]
    Overflow { log_magnitude: f64, cap: f64 },

    #[error("quadrature imaginary residual {imag:e} exceeds tolerance for value {value:e}")]
    ImaginaryResidual { value: f64, imag: f64 },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;
