//! Error types shared across the library.

use crate::spectral::Parity;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("grid mismatch: expected {expected:?}, got {got:?}")]
    GridMismatch {
        expected: (usize, usize, usize),
        got: (usize, usize, usize),
    },

    #[error("operands live on different domains")]
    DomainMismatch,

    #[error("parity mismatch: expected {expected:?}, got {got:?}")]
    ParityMismatch { expected: Parity, got: Parity },

    #[error("operation is singular on the (0,0,0) mean mode, which is nonzero here")]
    SingularMode,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("insufficient data: need at least {needed} samples, got {got}")]
    InsufficientData { needed: usize, got: usize },

    #[error("CFL violation at t={t}: dt={dt} exceeds advective limit {limit}")]
    Cfl { t: f64, dt: f64, limit: f64 },

    #[error("non-finite coefficients detected at t={t}")]
    BlowUp { t: f64 },

    #[error("internal consistency violation: {0}")]
    Contract(String),
}

pub type Result<T> = std::result::Result<T, Error>;
