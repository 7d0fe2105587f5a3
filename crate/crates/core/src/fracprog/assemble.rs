use super::{
    solve_charnes_cooper_with, solve_dinkelbach_with, solve_oracle, OracleGrid, SolverKind, SolverOptions,
    SubproblemSolution,
};
use crate::dkcore::{standard_dk, ComparisonSpec, DeltaVariant, TransformParams};
use crate::error::Result;
use crate::subspace::{rho1, rho2};

#[derive(Clone, Debug, Default)]
pub struct AssembleOptions {
    pub solver: SolverOptions,
    /// Re-solve every variant with Dinkelbach and record the agreement.
    pub dinkelbach: bool,
    /// Also run the grid oracle at this resolution.
    pub oracle: Option<OracleGrid>,
}

/// Agreement of a second solver with the Charnes–Cooper optimum.
#[derive(Clone, Debug)]
pub struct CrossCheck {
    pub variant: DeltaVariant,
    pub solver: SolverKind,
    pub primary: f64,
    pub secondary: f64,
    pub relative_difference: f64,
}

fn relative_difference(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else if a.is_finite() && b.is_finite() {
        (a - b).abs() / a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
    } else {
        f64::INFINITY
    }
}

/// Everything known about one comparison.
#[derive(Clone, Debug)]
pub struct BoundReport {
    pub n: usize,
    pub j: usize,
    pub r: usize,
    pub scaling_constant: f64,
    /// Charnes–Cooper solutions in [`DeltaVariant::ALL`] order.
    pub variants: Vec<SubproblemSolution>,
    pub dinkelbach: Vec<SubproblemSolution>,
    pub oracle: Vec<SubproblemSolution>,
    pub best: Option<SubproblemSolution>,
    /// Best parameters expressed for the original, unreversed matrices.
    pub params_original: Option<TransformParams>,
    /// `min(best objective, 1)`; 1 when nothing is feasible.
    pub extended_bound_rescaled: f64,
    pub extended_bound_raw: f64,
    /// `+inf` when the identity transform is infeasible.
    pub standard_dk_rescaled: f64,
    pub standard_dk_raw: f64,
    /// `rho_1` divided by the scaling constant.
    pub rho1_rescaled: f64,
    pub rho1: f64,
    pub rho2: f64,
    pub cross_checks: Vec<CrossCheck>,
    pub degenerate: bool,
    pub warnings: Vec<String>,
}

impl BoundReport {
    /// Whether the bound sits above the true distance within `tol`.
    pub fn dominates_rho1(&self, tol: f64) -> bool {
        self.extended_bound_raw >= self.rho1 - tol
    }
}

pub fn assemble_bound(spec: &ComparisonSpec, opts: &AssembleOptions) -> Result<BoundReport> {
    let c = spec.scaling_constant();
    let (w, v) = spec.blocks()?;
    let rho1 = rho1(&w, &v)?;
    let rho2 = rho2(&w, &v)?;

    let variants: Vec<_> = DeltaVariant::ALL
        .iter()
        .map(|&var| solve_charnes_cooper_with(spec, var, &opts.solver))
        .collect();

    let mut cross_checks = Vec::new();
    let mut dinkelbach = Vec::new();
    if opts.dinkelbach {
        for cc in &variants {
            let d = solve_dinkelbach_with(
                spec,
                cc.variant,
                TransformParams::new(cc.variant.sign(), 0.0),
                &opts.solver,
            );
            cross_checks.push(CrossCheck {
                variant: cc.variant,
                solver: SolverKind::Dinkelbach,
                primary: cc.objective_unscaled,
                secondary: d.objective_unscaled,
                relative_difference: relative_difference(cc.objective_unscaled, d.objective_unscaled),
            });
            dinkelbach.push(d);
        }
    }
    let mut oracle = Vec::new();
    if let Some(grid) = &opts.oracle {
        for cc in &variants {
            let o = solve_oracle(spec, cc.variant, grid);
            cross_checks.push(CrossCheck {
                variant: cc.variant,
                solver: SolverKind::Oracle,
                primary: cc.objective_unscaled,
                secondary: o.objective_unscaled,
                relative_difference: relative_difference(cc.objective_unscaled, o.objective_unscaled),
            });
            oracle.push(o);
        }
    }

    let best = if spec.is_degenerate() {
        None
    } else {
        variants
            .iter()
            .filter(|s| s.feasible && s.objective_unscaled.is_finite())
            .min_by(|a, b| a.objective_unscaled.total_cmp(&b.objective_unscaled))
            .cloned()
    };
    let extended = best.as_ref().map_or(1.0, |b| b.objective_unscaled.min(1.0));
    let sdk = standard_dk(spec);
    let params_original = best.as_ref().map(|b| spec.to_original(b.params));

    Ok(BoundReport {
        n: spec.n(),
        j: spec.j,
        r: spec.r,
        scaling_constant: c,
        variants,
        dinkelbach,
        oracle,
        best,
        params_original,
        extended_bound_rescaled: extended,
        extended_bound_raw: extended * c,
        standard_dk_rescaled: sdk.value,
        standard_dk_raw: sdk.value * c,
        rho1_rescaled: rho1 / c,
        rho1,
        rho2,
        cross_checks,
        degenerate: spec.is_degenerate(),
        warnings: spec.warnings.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectra::SymmetricMatrix;

    #[test]
    fn bound_sits_between_rho_and_standard() {
        let phi = SymmetricMatrix::from_rows(&[
            vec![1.0, -1.0, 0.0, 0.0],
            vec![-1.0, 2.0, -1.0, 0.0],
            vec![0.0, -1.0, 2.0, -1.0],
            vec![0.0, 0.0, -1.0, 1.0],
        ])
        .unwrap();
        let psi = SymmetricMatrix::from_rows(&[
            vec![1.2, -0.9, 0.1, 0.0],
            vec![-0.9, 2.1, -1.0, 0.05],
            vec![0.1, -1.0, 1.7, -0.8],
            vec![0.0, 0.05, -0.8, 1.1],
        ])
        .unwrap();
        let spec = ComparisonSpec::new(&phi, &psi, 1, 2, false, false).unwrap();
        let rep = assemble_bound(&spec, &AssembleOptions::default()).unwrap();
        assert!(rep.extended_bound_rescaled <= 1.0);
        assert!(rep.extended_bound_rescaled <= rep.standard_dk_rescaled + 1e-9);
        assert!(rep.dominates_rho1(1e-9));
        assert!(rep.rho2 <= rep.rho1 + 1e-12);
    }

    #[test]
    fn degenerate_spec_falls_back_to_trivial() {
        let phi = SymmetricMatrix::from_diagonal(&[0.0, 1.0, 2.0]).unwrap();
        let psi = SymmetricMatrix::from_diagonal(&[1.0, 1.0, 2.0]).unwrap();
        let spec = ComparisonSpec::new(&phi, &psi, 0, 1, false, false).unwrap();
        let rep = assemble_bound(&spec, &AssembleOptions::default()).unwrap();
        assert!(rep.degenerate);
        assert_eq!(rep.extended_bound_rescaled, 1.0);
        assert!(rep.best.is_none());
    }
}
