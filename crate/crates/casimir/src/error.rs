use thiserror::Error;

/// Errors produced by the numerical core.
#[derive(Debug, Error)]
pub enum CasimirError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is not symplectic (deviation {deviation:.3e} exceeds tol {tol:.3e})")]
    NonSymplectic { deviation: f64, tol: f64 },
    #[error("unphysical state: {0}")]
    Unphysical(String),
    #[error("mode index out of range: {index} (n_modes = {n_modes})")]
    IndexOutOfRange { index: usize, n_modes: usize },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
}

pub type Result<T> = std::result::Result<T, CasimirError>;
