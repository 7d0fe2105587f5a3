//! Derivative-free reference solver: a log-spaced scan over `|c1|`, an exact
//! feasible interval for `c0` at each `c1`, and nested golden-section search.
//! Its value is an upper bound on the true optimum.

use super::{SolverKind, SubproblemSolution};
use crate::dkcore::{feasibility, objective, ComparisonSpec, DeltaVariant, TransformParams};
use crate::spectra::{extreme_eigenvalues, SymmetricMatrix};

/// Search box and resolution. `|c1|` takes `points` log-spaced values in
/// `[c1_min, c1_max]`; `c0` ranges over `+-c0_half_width (1 + ||Psi||_2)`.
#[derive(Clone, Debug)]
pub struct OracleGrid {
    pub points: usize,
    pub c1_min: f64,
    pub c1_max: f64,
    pub c0_half_width: f64,
    pub golden_iters: usize,
}

impl Default for OracleGrid {
    fn default() -> Self {
        Self {
            points: 200,
            c1_min: 1e-3,
            c1_max: 1e3,
            c0_half_width: 10.0,
            golden_iters: 60,
        }
    }
}

const INV_PHI: f64 = 0.618_033_988_749_894_9;

fn golden<F: FnMut(f64) -> f64>(mut f: F, mut lo: f64, mut hi: f64, iters: usize) -> (f64, f64) {
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    for _ in 0..iters {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2);
        }
    }
    if f1 <= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

struct Slice<'a> {
    spec: &'a ComparisonSpec,
    variant: DeltaVariant,
    phi: &'a SymmetricMatrix,
    psi: &'a SymmetricMatrix,
    c0_limit: f64,
}

impl Slice<'_> {
    /// Best `c0` for fixed `c1`, with its objective.
    fn solve(&self, c1: f64, iters: usize) -> (f64, f64) {
        let (lmin, lmax) = extreme_eigenvalues(&self.phi.combine(c1, self.psi, -1.0, 0.0));
        let forms = self.spec.forms(self.variant);
        let p = TransformParams::new(c1, 0.0);
        let (mut lo, mut hi) = (-self.c0_limit, self.c0_limit);
        // every term must exceed zero and both constraint rows
        let mut linear = Vec::new();
        for f in &forms.terms {
            linear.push((f.b, f.eval(p)));
            for g in &forms.constraints {
                linear.push((f.b - g.b, f.eval(p) - g.eval(p)));
            }
        }
        for (alpha, beta) in linear {
            if alpha > 0.0 {
                lo = lo.max(-beta / alpha);
            } else if alpha < 0.0 {
                hi = hi.min(-beta / alpha);
            } else if beta <= 0.0 {
                return (f64::NAN, f64::INFINITY);
            }
        }
        if !(lo < hi) {
            return (f64::NAN, f64::INFINITY);
        }
        let ratio = |c0: f64| {
            let d = forms
                .terms
                .iter()
                .map(|f| f.eval(TransformParams::new(c1, c0)))
                .fold(f64::INFINITY, f64::min);
            if !(d > 0.0) || !d.is_finite() {
                return f64::INFINITY;
            }
            (lmax + c0).max(-lmin - c0) / d
        };
        let (c0, v) = golden(ratio, lo, hi, iters);
        if feasibility(self.spec, TransformParams::new(c1, c0), self.variant).feasible {
            (c0, v)
        } else {
            (c0, f64::INFINITY)
        }
    }
}

pub fn solve_oracle(spec: &ComparisonSpec, variant: DeltaVariant, grid: &OracleGrid) -> SubproblemSolution {
    let kind = SolverKind::Oracle;
    if spec.is_degenerate() {
        return SubproblemSolution::infeasible(variant, kind, 0);
    }
    let sigma = variant.sign();
    let slice = Slice {
        spec,
        variant,
        phi: &spec.phi,
        psi: &spec.psi,
        c0_limit: grid.c0_half_width * (1.0 + spec.psi_norm),
    };
    let (lmin, lmax) = (grid.c1_min.ln(), grid.c1_max.ln());
    let m = grid.points.max(2);
    let to_c1 = |s: f64| sigma * s.exp();
    let mut values = Vec::with_capacity(m);
    for i in 0..m {
        let s = lmin + (lmax - lmin) * i as f64 / (m - 1) as f64;
        values.push((s, slice.solve(to_c1(s), grid.golden_iters)));
    }
    let evaluations = m;
    let Some(best) = (0..m)
        .filter(|&i| values[i].1 .1.is_finite())
        .min_by(|&a, &b| values[a].1 .1.total_cmp(&values[b].1 .1))
    else {
        return SubproblemSolution::infeasible(variant, kind, evaluations);
    };
    let (mut bs, (mut bc0, mut bv)) = values[best];
    let lo = values[best.saturating_sub(1)].0;
    let hi = values[(best + 1).min(m - 1)].0;
    if hi > lo {
        let (s, _) = golden(
            |s| slice.solve(to_c1(s), grid.golden_iters).1,
            lo,
            hi,
            grid.golden_iters,
        );
        let (c0, v) = slice.solve(to_c1(s), grid.golden_iters);
        if v < bv {
            bs = s;
            bc0 = c0;
            bv = v;
        }
    }
    let p = TransformParams::new(to_c1(bs), bc0);
    let rep = feasibility(spec, p, variant);
    let mut sol = SubproblemSolution::infeasible(variant, kind, evaluations + grid.golden_iters);
    if rep.feasible && bv.is_finite() {
        sol.params = p;
        sol.feasible = true;
        sol.objective_unscaled = objective(spec, p, variant);
        sol.strictness_margin = rep.strictness_margin;
    }
    sol
}
