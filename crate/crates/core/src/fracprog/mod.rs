//! The four affine subproblems as concave-convex fractional programs.
//!
//! Two independent routes solve each subproblem: the Charnes–Cooper
//! reparameterization (a single convex program) and Dinkelbach's parametric
//! iteration. Both drive the same Kelley cutting-plane engine, whose cuts
//! come from extreme eigenvectors of the residual matrix. A grid and
//! golden-section oracle provides a third, derivative-free check.

mod assemble;
mod charnes_cooper;
pub mod cutting_plane;
mod dinkelbach;
pub mod lp;
mod oracle;
mod problem;

use std::fmt;

use crate::dkcore::{DeltaVariant, TransformParams};

pub use assemble::{assemble_bound, AssembleOptions, BoundReport, CrossCheck};
pub use charnes_cooper::{
    from_charnes_cooper, solve_charnes_cooper, solve_charnes_cooper_with, to_charnes_cooper, CharnesCooperPoint,
};
pub use dinkelbach::{solve_dinkelbach, solve_dinkelbach_with};
pub use oracle::{solve_oracle, OracleGrid};
pub use problem::exact_affine_fit;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SolverKind {
    CharnesCooper,
    Dinkelbach,
    Oracle,
}

impl fmt::Display for SolverKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SolverKind::CharnesCooper => "charnes-cooper",
            SolverKind::Dinkelbach => "dinkelbach",
            SolverKind::Oracle => "oracle",
        })
    }
}

/// Tolerances shared by the cutting-plane routes.
#[derive(Clone, Debug)]
pub struct SolverOptions {
    /// Relative gap at which the Charnes–Cooper loop stops.
    pub tol: f64,
    pub max_iter: usize,
    /// Dinkelbach stops once the parametric value is at most `dinkelbach_tol (1 + lambda)`.
    pub dinkelbach_tol: f64,
    pub dinkelbach_max_iter: usize,
    /// Collect a line-per-iteration text log.
    pub trace: bool,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            tol: 1e-10,
            max_iter: 3000,
            dinkelbach_tol: 1e-9,
            dinkelbach_max_iter: 100,
            trace: false,
        }
    }
}

/// The optimum of one variant's subproblem.
#[derive(Clone, Debug)]
pub struct SubproblemSolution {
    pub variant: DeltaVariant,
    /// Optimal parameters for the spec's (oriented) matrices.
    pub params: TransformParams,
    /// `||c1 Phi + c0 I - Psi||_2 / delta` at `params`; `+inf` when infeasible.
    pub objective_unscaled: f64,
    pub feasible: bool,
    pub solver: SolverKind,
    pub iterations: usize,
    /// Smallest constraint residual at `params`.
    pub strictness_margin: f64,
    /// The optimum is the limit 1 approached as `|c0| -> inf`; `params` is a
    /// far-out representative.
    pub supremum: bool,
    /// The residual matrix vanishes at `params`.
    pub exact_match: bool,
    /// Final upper bound minus incumbent of the convex master problem.
    pub certificate_gap: f64,
    /// Dinkelbach `(lambda_k, F(lambda_k))` pairs.
    pub lambda_trace: Vec<(f64, f64)>,
    pub trace: String,
    pub notes: Vec<String>,
}

impl SubproblemSolution {
    pub(crate) fn infeasible(variant: DeltaVariant, solver: SolverKind, iterations: usize) -> Self {
        Self {
            variant,
            params: TransformParams::new(f64::NAN, f64::NAN),
            objective_unscaled: f64::INFINITY,
            feasible: false,
            solver,
            iterations,
            strictness_margin: f64::NEG_INFINITY,
            supremum: false,
            exact_match: false,
            certificate_gap: f64::NAN,
            lambda_trace: Vec::new(),
            trace: String::new(),
            notes: Vec::new(),
        }
    }
}
