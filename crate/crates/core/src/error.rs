use thiserror::Error;

/// Errors produced by the linear algebra, bound and model layers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is not symmetric: max |X - X^T| = {asymmetry:e} exceeds {tolerance:e}")]
    NotSymmetric { asymmetry: f64, tolerance: f64 },

    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("eigensolver did not converge for n = {n} (off-diagonal residual {residual:e})")]
    NoConvergence { n: usize, residual: f64 },

    #[error("matrix is not positive definite (non-positive pivot at index {pivot})")]
    NotPositiveDefinite { pivot: usize },

    #[error("index out of range: {0}")]
    IndexOutOfRange(String),

    #[error("sign constraint violated: {variant} requires {requirement}, got c1 = {c1}")]
    SignConstraint {
        variant: &'static str,
        requirement: &'static str,
        c1: f64,
    },

    #[error("exact affine match: c1*Phi + c0*I - Psi has zero spectral norm, bound is 0")]
    ExactMatch,

    #[error("vertex {vertex} has zero degree, L_sym undefined")]
    ZeroDegree { vertex: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
