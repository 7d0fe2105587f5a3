use super::cutting_plane::{kelley, Cut, KelleyOptions, KelleyStatus, Probe, Separator};
use super::lp::Lp;
use super::problem::{exact_affine_fit, Normalized, DRIFT_OFFSET, KAPPA};
use super::{SolverKind, SolverOptions, SubproblemSolution};
use crate::dkcore::{feasibility, objective, ComparisonSpec, DeltaVariant, TransformParams};
use crate::error::{Error, Result};
use crate::spectra::spectral_norm_value;

/// `(y1, y2, t) = (c1, c0, 1) / ||c1 Phi + c0 I - Psi||_2`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CharnesCooperPoint {
    pub y1: f64,
    pub y2: f64,
    pub t: f64,
}

pub fn to_charnes_cooper(params: TransformParams, spec: &ComparisonSpec) -> Result<CharnesCooperPoint> {
    let nu = spectral_norm_value(&spec.residual_matrix(params));
    if nu == 0.0 {
        return Err(Error::ExactMatch);
    }
    Ok(CharnesCooperPoint {
        y1: params.c1 / nu,
        y2: params.c0 / nu,
        t: 1.0 / nu,
    })
}

pub fn from_charnes_cooper(point: CharnesCooperPoint) -> TransformParams {
    TransformParams {
        c1: point.y1 / point.t,
        c0: point.y2 / point.t,
    }
}

/// Separation oracle on `(y1, y2, t, z)`: eigenvector cuts for the unit
/// spectral-norm ball, incumbents from the ray through the iterate.
struct CcSeparator<'s, 'a> {
    nz: &'s Normalized<'a>,
}

pub(crate) fn norm_cuts(nz: &Normalized<'_>, ex: &crate::spectra::Extremes, bound: f64) -> Vec<(f64, f64, f64, f64)> {
    // (sign, u^T Phi u, u^T Psi u, eigenvalue) for violated extremes
    let mut out = Vec::new();
    if ex.max.value > bound {
        let (p, q) = nz.quadratic_forms(&ex.max.vector);
        out.push((1.0, p, q, ex.max.value));
    }
    if -ex.min.value > bound {
        let (p, q) = nz.quadratic_forms(&ex.min.vector);
        out.push((-1.0, p, q, ex.min.value));
    }
    out
}

impl Separator for CcSeparator<'_, '_> {
    fn probe(&mut self, x: &[f64]) -> Probe {
        let (y1, y2, t) = (x[0], x[1], x[2]);
        let ex = self.nz.extremes(y1, y2, t);
        let nu = ex.max.value.max(-ex.min.value);
        let cuts = norm_cuts(self.nz, &ex, 1.0 + 1e-12)
            .into_iter()
            .map(|(s, p, q, _)| Cut {
                coeffs: vec![s * p, s, -s * q, 0.0],
                rhs: 1.0,
            })
            .collect();
        let value = (nu > 0.0).then(|| self.nz.ratio_h(y1, y2, t)).flatten();
        Probe {
            value,
            cuts,
            note: None,
        }
    }
}

/// Charnes–Cooper route with default tolerances.
pub fn solve_charnes_cooper(spec: &ComparisonSpec, variant: DeltaVariant) -> SubproblemSolution {
    solve_charnes_cooper_with(spec, variant, &SolverOptions::default())
}

/// Maximizes the homogeneous separation `delta(y1, y2, t)` subject to
/// `||y1 Phi + y2 I - t Psi||_2 <= 1` and the variant's linear rows, then
/// maps the maximizer back to `(c1, c0) = (y1, y2) / t`. The bound is the
/// reciprocal of the optimal value.
pub fn solve_charnes_cooper_with(
    spec: &ComparisonSpec,
    variant: DeltaVariant,
    opts: &SolverOptions,
) -> SubproblemSolution {
    let kind = SolverKind::CharnesCooper;
    if spec.is_degenerate() {
        let mut s = SubproblemSolution::infeasible(variant, kind, 0);
        s.notes.extend(spec.warnings.iter().cloned());
        return s;
    }
    if let Some(sol) = exact_match_solution(spec, variant, kind) {
        return sol;
    }

    let nz = Normalized::new(spec, variant);
    let (a, b, sigma) = (nz.a, nz.b, nz.sigma);
    let min_norm = (spec.phi_norm / a).min(spec.psi_norm / b);
    let y = 1e3 / (1.0 + min_norm);
    let (y1_lo, y1_hi) = if sigma > 0.0 { (0.0, y) } else { (-y, 0.0) };
    let mut lp = Lp::new(
        vec![0.0, 0.0, 0.0, 1.0],
        vec![y1_lo, -y, 0.0, 0.0],
        vec![y1_hi, y, y, 4.0 * y],
    );
    for f in &nz.terms {
        // z <= a y1 + b y2 + k t
        lp.add_row(vec![-f.a, -f.b, -f.k, 1.0], 0.0);
    }
    for g in &nz.constraints {
        // delta - g >= kappa (t / b + z)
        lp.add_row(vec![g.a, g.b, g.k + KAPPA / b, KAPPA - 1.0], 0.0);
    }
    // sigma c1 > eps and delta > eps, scaled to homogeneous form
    lp.add_row(vec![-sigma, 0.0, KAPPA * a / b, KAPPA * a], 0.0);
    lp.add_row(vec![0.0, 0.0, KAPPA / b, KAPPA - 1.0], 0.0);

    let kopts = KelleyOptions {
        tol: opts.tol,
        max_iter: opts.max_iter,
        max_growth: 3,
        growable: vec![true; 4],
        trace: opts.trace,
    };
    let seed = vec![sigma, 0.0, 1.0, 0.0];
    let res = kelley(&mut lp, &mut CcSeparator { nz: &nz }, &[seed], &kopts);

    let Some(x) = res.best_x.clone().filter(|_| res.best_value > 0.0) else {
        let mut s = SubproblemSolution::infeasible(variant, kind, res.iterations);
        s.certificate_gap = res.gap();
        s.trace = res.trace;
        if res.status != KelleyStatus::Converged && res.upper_bound > 1e-12 {
            s.notes.push(format!("no certified incumbent ({:?})", res.status));
        }
        return s;
    };
    let mut sol = conclude(&nz, (x[0], x[1], x[2]), res.best_value, kind, res.iterations);
    sol.certificate_gap = res.gap();
    sol.trace = res.trace.clone();
    if res.status != KelleyStatus::Converged {
        sol.notes.push(format!(
            "cutting plane stopped with {:?}, gap {:.3e}",
            res.status,
            res.gap()
        ));
    }
    sol
}

/// Short-circuits an exact affine relation `Psi = c1 Phi + c0 I`.
pub(crate) fn exact_match_solution(
    spec: &ComparisonSpec,
    variant: DeltaVariant,
    kind: SolverKind,
) -> Option<SubproblemSolution> {
    let p = exact_affine_fit(spec)?;
    let rep = feasibility(spec, p, variant);
    if !rep.feasible {
        return None;
    }
    let mut s = SubproblemSolution::infeasible(variant, kind, 0);
    s.params = p;
    s.objective_unscaled = objective(spec, p, variant);
    s.feasible = true;
    s.exact_match = true;
    s.strictness_margin = rep.strictness_margin;
    s.certificate_gap = 0.0;
    Some(s)
}

/// Builds a record at `params`, demoting it when strict verification fails.
pub(crate) fn finish(
    nz: &Normalized<'_>,
    params: TransformParams,
    kind: SolverKind,
    iterations: usize,
) -> SubproblemSolution {
    let rep = feasibility(nz.spec, params, nz.variant);
    let mut s = SubproblemSolution::infeasible(nz.variant, kind, iterations);
    s.params = params;
    s.strictness_margin = rep.strictness_margin;
    if rep.feasible {
        s.feasible = true;
        s.objective_unscaled = objective(nz.spec, params, nz.variant);
    } else {
        s.notes
            .push("optimum violates a strict inequality; demoted to infeasible".into());
    }
    s
}

/// Turns the best homogeneous point `(y1, y2, t)` with ratio `ratio` into a
/// record: a finite optimum, a limit along a direction at infinity, or the
/// boundary-block supremum 1.
pub(crate) fn conclude(
    nz: &Normalized<'_>,
    (y1, y2, t): (f64, f64, f64),
    ratio: f64,
    kind: SolverKind,
    iterations: usize,
) -> SubproblemSolution {
    let horizon = nz.is_horizon(y1, y2, t);
    let drifting = horizon || (y2 / t).abs() > DRIFT_OFFSET;
    let near_limit = (ratio - 1.0).abs() <= 1e-6 && drifting;
    if nz.boundary_block() && (near_limit || ratio <= 1.0) {
        if let Some(s) = supremum_solution(nz, kind, iterations) {
            return s;
        }
    }
    if horizon {
        let Some(p) = nz.horizon_representative(y1, y2) else {
            let mut s = SubproblemSolution::infeasible(nz.variant, kind, iterations);
            s.notes
                .push("optimum lies at infinity and no finite representative verifies".into());
            return s;
        };
        let mut s = finish(nz, p, kind, iterations);
        if s.feasible {
            s.objective_unscaled = 1.0 / ratio;
            s.supremum = true;
            s.notes.push(format!(
                "infimum approached as (c1, c0) grows along ({y1:.6e}, {y2:.6e})"
            ));
        }
        return s;
    }
    finish(nz, nz.denormalize(y1 / t, y2 / t), kind, iterations)
}

pub(crate) fn supremum_solution(
    nz: &Normalized<'_>,
    kind: SolverKind,
    iterations: usize,
) -> Option<SubproblemSolution> {
    let (p, _) = nz.supremum_representative()?;
    let mut s = finish(nz, p, kind, iterations);
    if !s.feasible {
        return None;
    }
    s.objective_unscaled = 1.0;
    s.supremum = true;
    s.notes
        .push("optimum is the supremum 1, approached as |c0| grows without bound".into());
    Some(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectra::SymmetricMatrix;

    fn diag(d: &[f64]) -> SymmetricMatrix {
        SymmetricMatrix::from_diagonal(d).unwrap()
    }

    #[test]
    fn transform_examples() {
        let phi = diag(&[0.0, 1.0, 2.0]);
        let psi = diag(&[0.0, 2.0, 4.0]);
        let spec = ComparisonSpec::new(&phi, &psi, 0, 1, false, false).unwrap();
        // ||Phi - Psi|| = 2
        let p = to_charnes_cooper(TransformParams::new(1.0, 0.0), &spec).unwrap();
        assert_eq!(
            p,
            CharnesCooperPoint {
                y1: 0.5,
                y2: 0.0,
                t: 0.5
            }
        );
        // 2 Phi - I - Psi = 4 I for this Psi
        let psi4 = diag(&[-5.0, -3.0, -1.0]);
        let spec4 = ComparisonSpec::new(&phi, &psi4, 0, 1, false, false).unwrap();
        let q = to_charnes_cooper(TransformParams::new(2.0, -1.0), &spec4).unwrap();
        assert_eq!(
            q,
            CharnesCooperPoint {
                y1: 0.5,
                y2: -0.25,
                t: 0.25
            }
        );
        let back = from_charnes_cooper(q);
        assert_eq!(back, TransformParams::new(2.0, -1.0));
        assert!(matches!(
            to_charnes_cooper(TransformParams::new(2.0, 0.0), &spec),
            Err(Error::ExactMatch)
        ));
    }

    #[test]
    fn exact_pairs_short_circuit() {
        let phi = diag(&[1.0, 2.0, 3.0]);
        let spec = ComparisonSpec::new(&phi, &phi, 1, 1, false, false).unwrap();
        let s = solve_charnes_cooper(&spec, DeltaVariant::D1Plus);
        assert!(s.feasible && s.exact_match);
        assert_eq!(s.objective_unscaled, 0.0);
        assert!((s.params.c1 - 1.0).abs() < 1e-12 && s.params.c0.abs() < 1e-12);

        let spec = ComparisonSpec::new(&diag(&[0.0, 1.0, 2.0]), &diag(&[0.0, 2.0, 4.0]), 0, 1, false, false).unwrap();
        let s = solve_charnes_cooper(&spec, DeltaVariant::D1Plus);
        assert_eq!(s.objective_unscaled, 0.0);
        assert!((s.params.c1 - 2.0).abs() < 1e-12 && s.params.c0.abs() < 1e-12);
    }

    #[test]
    fn never_worse_than_identity() {
        let phi = SymmetricMatrix::from_rows(&[
            vec![2.0, 0.3, 0.0, 0.1],
            vec![0.3, 1.0, 0.2, 0.0],
            vec![0.0, 0.2, -1.0, 0.4],
            vec![0.1, 0.0, 0.4, 3.0],
        ])
        .unwrap();
        let psi = SymmetricMatrix::from_rows(&[
            vec![2.2, 0.1, 0.0, 0.0],
            vec![0.1, 0.8, 0.3, 0.1],
            vec![0.0, 0.3, -0.7, 0.2],
            vec![0.0, 0.1, 0.2, 3.5],
        ])
        .unwrap();
        let spec = ComparisonSpec::new(&phi, &psi, 1, 2, false, false).unwrap();
        for v in [DeltaVariant::D1Plus, DeltaVariant::D2Plus] {
            let id = objective(&spec, TransformParams::IDENTITY, v);
            let s = solve_charnes_cooper(&spec, v);
            if id.is_finite() {
                assert!(s.feasible);
                assert!(
                    s.objective_unscaled <= id + 1e-8,
                    "{v}: {} vs {id}",
                    s.objective_unscaled
                );
            }
            if s.feasible {
                assert!(s.certificate_gap <= 1e-8 * (1.0 + 1.0 / s.objective_unscaled));
            }
        }
    }
}
