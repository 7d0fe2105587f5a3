//! Dense real symmetric linear algebra.

mod extreme;
pub mod io;
mod jacobi;
mod matrix;

pub use extreme::{
    extreme_eigenpairs, extreme_eigenvalues, spectral_norm, spectral_norm_value, EigenPair, Extremes, SpectralNorm,
};
pub use jacobi::{cholesky, eigh, EigenSystem, MAX_SWEEPS, OFF_DIAGONAL_TOL};
pub use matrix::{frobenius_norm, Matrix, SymmetricMatrix, ASYMMETRY_TOLERANCE};
