use thiserror::Error;

use crate::grid::Params;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("Landau parameter must satisfy a > 1 (got a = {a})")]
    InvalidLandauParam { a: f64 },

    #[error("polar angle must lie in [0, π] (got φ = {phi})")]
    InvalidAngle { phi: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("zero vector where a nonzero vector is required")]
    ZeroVector,

    #[error("eigensolver failed for {params}: {reason}")]
    Solver { params: Box<Params>, reason: String },

    #[error("pencil has {finite} finite eigenvalues, expected {expected} ({params})")]
    InfiniteEigenvalueCount {
        params: Box<Params>,
        finite: usize,
        expected: usize,
    },

    #[error("bordered system is singular (reciprocal condition estimate {rcond:.3e}) for {params}")]
    SingularBordered { params: Box<Params>, rcond: f64 },

    #[error("swirl spectrum not in the open right half-plane at {params}: min Re = {min_real:.6e}, min |λ| = {min_abs:.6e}")]
    PositivityViolation {
        params: Box<Params>,
        min_real: f64,
        min_abs: f64,
    },

    #[error("linear algebra backend: {0}")]
    Backend(#[from] ndarray_linalg::error::LinalgError),
}

impl Error {
    /// True for errors caused by rejected inputs rather than by a failed computation.
    pub fn is_invalid_input(&self) -> bool {
        matches!(
            self,
            Error::InvalidLandauParam { .. }
                | Error::InvalidAngle { .. }
                | Error::InvalidParameter(_)
                | Error::DimensionMismatch { .. }
                | Error::ZeroVector
        )
    }
}
