//! Affine-transform Davis–Kahan bounds for subspaces spanned by consecutive
//! eigenvectors of two symmetric matrices.
//!
//! The bound minimizes `||c1 Phi + c0 I - Psi||_2 / delta` over the affine
//! parameters `(c1, c0)`, across four eigenvalue-separation variants. Each
//! variant is a concave-convex fractional program, solved here both through
//! the Charnes–Cooper reparameterization and Dinkelbach's iteration.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod dkcore;
pub mod error;
pub mod fracprog;
pub mod models;
pub mod spectra;
pub mod subspace;

pub use error::{Error, Result};
pub use spectra::{cholesky, eigh, frobenius_norm, spectral_norm, EigenSystem, Matrix, SpectralNorm, SymmetricMatrix};
