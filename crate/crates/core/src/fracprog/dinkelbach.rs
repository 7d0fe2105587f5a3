use std::fmt::Write as _;

use super::charnes_cooper::{conclude, exact_match_solution, norm_cuts};
use super::cutting_plane::{kelley, Cut, KelleyOptions, Probe, Separator};
use super::lp::Lp;
use super::problem::{Normalized, KAPPA};
use super::{SolverKind, SolverOptions, SubproblemSolution};
use crate::dkcore::{ComparisonSpec, DeltaVariant, TransformParams};

/// Parametric problem on `(y1, y2, t, w, s, z)` with
/// `sigma y1 + t + w = 1`, `w >= |y2|`: maximize `z - lambda s`, `z` below
/// delta and `s` above supporting planes of the spectral norm. The ratio is
/// invariant under scaling of `(y1, y2, t)`, so this compact slice meets
/// every ray, and `t = 0` covers the directions at infinity.
struct ParametricSeparator<'s, 'a> {
    nz: &'s Normalized<'a>,
    lambda: f64,
}

impl Separator for ParametricSeparator<'_, '_> {
    fn probe(&mut self, x: &[f64]) -> Probe {
        let (y1, y2, t, s) = (x[0], x[1], x[2], x[4]);
        let ex = self.nz.extremes(y1, y2, t);
        let nu = ex.max.value.max(-ex.min.value);
        // s >= sign u^T M u, i.e. sign (p y1 + y2 - q t) - s <= 0
        let cuts = norm_cuts(self.nz, &ex, s + 1e-13 * (1.0 + s.abs()))
            .into_iter()
            .map(|(sg, p, q, _)| Cut {
                coeffs: vec![sg * p, sg, -sg * q, 0.0, -1.0, 0.0],
                rhs: 0.0,
            })
            .collect();
        let value = self
            .nz
            .ratio_h(y1, y2, t)
            .map(|_| self.nz.delta_h(y1, y2, t) - self.lambda * nu);
        Probe {
            value,
            cuts,
            note: Some(self.lambda),
        }
    }
}

/// Dinkelbach route with default tolerances.
pub fn solve_dinkelbach(spec: &ComparisonSpec, variant: DeltaVariant, init: TransformParams) -> SubproblemSolution {
    solve_dinkelbach_with(spec, variant, init, &SolverOptions::default())
}

/// Dinkelbach's parametric iteration: starting from the ratio at `init`
/// (or 0 when `init` is infeasible), solve
/// `F(lambda) = max delta - lambda ||c1 Phi + c0 I - Psi||_2` and update
/// `lambda` to the ratio at the maximizer until `F(lambda)` vanishes. The
/// bound is `1 / lambda`. `init` seeds the cut pool and the incumbent.
pub fn solve_dinkelbach_with(
    spec: &ComparisonSpec,
    variant: DeltaVariant,
    init: TransformParams,
    opts: &SolverOptions,
) -> SubproblemSolution {
    let kind = SolverKind::Dinkelbach;
    if spec.is_degenerate() {
        let mut s = SubproblemSolution::infeasible(variant, kind, 0);
        s.notes.extend(spec.warnings.iter().cloned());
        return s;
    }
    if let Some(mut sol) = exact_match_solution(spec, variant, kind) {
        sol.lambda_trace.push((f64::INFINITY, 0.0));
        return sol;
    }

    let nz = Normalized::new(spec, variant);
    let (a, b, sigma) = (nz.a, nz.b, nz.sigma);
    let homogeneous = |p: TransformParams| {
        let (c1, c0) = nz.normalize(p);
        let w = sigma * c1 + c0.abs() + 1.0;
        [c1 / w, c0 / w, 1.0 / w]
    };
    let init_y = if init.c1.is_finite() && init.c0.is_finite() && init.c1 * sigma > 0.0 {
        homogeneous(init)
    } else {
        [sigma * 0.5, 0.0, 0.5]
    };

    // ||y1 Phi' + y2 I - t Psi'|| and delta are both at most sigma y1 + |y2| + t = 1
    let lower = vec![sigma.min(0.0), -1.0, 0.0, 0.0, 0.0, 0.0];
    let upper = vec![sigma.max(0.0), 1.0, 1.0, 1.0, 2.0, 2.0];

    let mut fixed_rows: Vec<(Vec<f64>, f64)> = Vec::new();
    for f in &nz.terms {
        // z <= a y1 + b y2 + k t
        fixed_rows.push((vec![-f.a, -f.b, -f.k, 0.0, 0.0, 1.0], 0.0));
    }
    for g in &nz.constraints {
        // delta - g >= kappa (t / b + z)
        fixed_rows.push((vec![g.a, g.b, g.k + KAPPA / b, 0.0, 0.0, KAPPA - 1.0], 0.0));
    }
    fixed_rows.push((vec![-sigma, 0.0, KAPPA * a / b, 0.0, 0.0, KAPPA * a], 0.0));
    fixed_rows.push((vec![0.0, 0.0, KAPPA / b, 0.0, 0.0, KAPPA - 1.0], 0.0));
    fixed_rows.push((vec![0.0, 1.0, 0.0, -1.0, 0.0, 0.0], 0.0));
    fixed_rows.push((vec![0.0, -1.0, 0.0, -1.0, 0.0, 0.0], 0.0));
    fixed_rows.push((vec![sigma, 0.0, 1.0, 1.0, 0.0, 0.0], 1.0));
    fixed_rows.push((vec![-sigma, 0.0, -1.0, -1.0, 0.0, 0.0], -1.0));

    let seed = |y: &[f64; 3]| vec![y[0], y[1], y[2], y[1].abs(), 0.0, 0.0];
    let mut pool: Vec<Cut> = Vec::new();
    let mut best: Option<(f64, [f64; 3])> = nz.ratio_h(init_y[0], init_y[1], init_y[2]).map(|r| (r, init_y));
    let mut lambda = best.map_or(0.0, |b| b.0);

    let mut lambda_trace = Vec::new();
    let mut trace = String::new();
    let mut iterations = 0;
    let mut converged = false;
    let mut last_f = f64::INFINITY;

    for k in 0..opts.dinkelbach_max_iter {
        iterations = k + 1;
        let mut lp = Lp::new(vec![0.0, 0.0, 0.0, 0.0, -lambda, 1.0], lower.clone(), upper.clone());
        for (row, rhs) in &fixed_rows {
            lp.add_row(row.clone(), *rhs);
        }
        for c in &pool {
            lp.add_row(c.coeffs.clone(), c.rhs);
        }
        let before = lp.num_rows();
        let mut sep = ParametricSeparator { nz: &nz, lambda };
        let kopts = KelleyOptions {
            tol: 0.1 * opts.dinkelbach_tol,
            max_iter: opts.max_iter,
            max_growth: 0,
            growable: Vec::new(),
            trace: opts.trace,
        };
        let mut seeds = vec![seed(&init_y)];
        if let Some((_, y)) = &best {
            seeds.push(seed(y));
        }
        let res = kelley(&mut lp, &mut sep, &seeds, &kopts);
        pool.extend(lp.rows_from(before).map(|(coeffs, rhs)| Cut {
            coeffs: coeffs.to_vec(),
            rhs,
        }));
        trace.push_str(&res.trace);

        let f_upper = res.upper_bound;
        last_f = f_upper;
        lambda_trace.push((lambda, f_upper));
        if opts.trace {
            let _ = writeln!(trace, "dinkelbach k={k} lambda={lambda:.15e} F={f_upper:.6e}");
        }
        if f_upper <= opts.dinkelbach_tol * (1.0 + lambda) {
            converged = true;
            break;
        }
        let drifting = best
            .is_some_and(|(r, y)| nz.boundary_block() && nz.is_horizon(y[0], y[1], y[2]) && (r - 1.0).abs() <= 1e-6);
        if drifting && f_upper <= 1e-6 {
            // the remaining gap closes only in the limit |c0| -> inf
            converged = true;
            break;
        }
        let Some(x) = res.best_x else { break };
        let y = [x[0], x[1], x[2]];
        let Some(ratio) = nz.ratio_h(y[0], y[1], y[2]) else {
            break;
        };
        if ratio <= lambda + 1e-12 * (1.0 + lambda) {
            break;
        }
        lambda = ratio;
        best = Some((ratio, y));
    }

    let Some((ratio, y)) = best.filter(|b| b.0 > 0.0) else {
        let mut s = SubproblemSolution::infeasible(variant, kind, iterations);
        s.lambda_trace = lambda_trace;
        s.trace = trace;
        return s;
    };
    let mut sol = conclude(&nz, (y[0], y[1], y[2]), ratio, kind, iterations);
    sol.lambda_trace = lambda_trace;
    sol.certificate_gap = last_f;
    sol.trace = trace;
    if !converged {
        sol.notes.push(format!(
            "dinkelbach stopped after {iterations} iterations with F = {last_f:.3e}"
        ));
    }
    sol
}
