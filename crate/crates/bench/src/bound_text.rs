//! Labeled text and JSON renderings of a single-comparison report.

use std::fmt::Write as _;

use dkext::dkcore::ComparisonSpec;
use dkext::fracprog::{BoundReport, SubproblemSolution};
use serde_json::{json, Value};

fn num(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else if x.is_nan() {
        json!("nan")
    } else if x > 0.0 {
        json!("inf")
    } else {
        json!("-inf")
    }
}

fn solution_json(s: &SubproblemSolution) -> Value {
    json!({
        "variant": s.variant.name(),
        "solver": s.solver.to_string(),
        "feasible": s.feasible,
        "objective": num(s.objective_unscaled),
        "c1": num(s.params.c1),
        "c0": num(s.params.c0),
        "iterations": s.iterations,
        "supremum": s.supremum,
        "exact_match": s.exact_match,
        "notes": s.notes,
    })
}

pub fn report_json(spec: &ComparisonSpec, r: &BoundReport) -> Value {
    json!({
        "n": r.n,
        "j": r.j,
        "r": r.r,
        "reverse_phi": spec.reverse_phi,
        "reverse_psi": spec.reverse_psi,
        "scaling_constant": num(r.scaling_constant),
        "extended_bound_rescaled": num(r.extended_bound_rescaled),
        "extended_bound_raw": num(r.extended_bound_raw),
        "standard_dk_rescaled": num(r.standard_dk_rescaled),
        "standard_dk_raw": num(r.standard_dk_raw),
        "rho1": num(r.rho1),
        "rho1_rescaled": num(r.rho1_rescaled),
        "rho2": num(r.rho2),
        "best_variant": r.best.as_ref().map(|b| b.variant.name()),
        "c1": r.params_original.map(|p| num(p.c1)),
        "c0": r.params_original.map(|p| num(p.c0)),
        "degenerate": r.degenerate,
        "warnings": r.warnings,
        "variants": r.variants.iter().map(solution_json).collect::<Vec<_>>(),
        "dinkelbach": r.dinkelbach.iter().map(solution_json).collect::<Vec<_>>(),
        "oracle": r.oracle.iter().map(solution_json).collect::<Vec<_>>(),
        "cross_checks": r.cross_checks.iter().map(|c| json!({
            "variant": c.variant.name(),
            "solver": c.solver.to_string(),
            "primary": num(c.primary),
            "secondary": num(c.secondary),
            "relative_difference": num(c.relative_difference),
        })).collect::<Vec<_>>(),
    })
}

fn solution_line(out: &mut String, s: &SubproblemSolution) {
    if s.feasible {
        let _ = write!(
            out,
            "  {:<4} {:<15} objective {:.12e}  c1 {:.9e}  c0 {:.9e}  iterations {}",
            s.variant.name(),
            s.solver.to_string(),
            s.objective_unscaled,
            s.params.c1,
            s.params.c0,
            s.iterations
        );
        if s.supremum {
            out.push_str("  (supremum)");
        }
        if s.exact_match {
            out.push_str("  (exact match)");
        }
    } else {
        let _ = write!(out, "  {:<4} {:<15} infeasible", s.variant.name(), s.solver.to_string());
    }
    out.push('\n');
}

pub fn report_text(spec: &ComparisonSpec, r: &BoundReport) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "n = {}, j = {}, r = {}, reverse_phi = {}, reverse_psi = {}",
        r.n, r.j, r.r, spec.reverse_phi, spec.reverse_psi
    );
    let _ = writeln!(s, "scaling constant        {:.12e}", r.scaling_constant);
    let _ = writeln!(s, "extended bound (rescaled) {:.12e}", r.extended_bound_rescaled);
    let _ = writeln!(s, "extended bound (raw)    {:.12e}", r.extended_bound_raw);
    if r.standard_dk_rescaled.is_finite() {
        let _ = writeln!(s, "standard DK (rescaled)  {:.12e}", r.standard_dk_rescaled);
        let _ = writeln!(s, "standard DK (raw)       {:.12e}", r.standard_dk_raw);
    } else {
        let _ = writeln!(s, "standard DK             infeasible");
    }
    let _ = writeln!(s, "rho1                    {:.12e}", r.rho1);
    let _ = writeln!(s, "rho1 (rescaled)         {:.12e}", r.rho1_rescaled);
    let _ = writeln!(s, "rho2                    {:.12e}", r.rho2);
    match (&r.best, r.params_original) {
        (Some(b), Some(p)) => {
            let _ = writeln!(s, "best variant            {}", b.variant.name());
            let _ = writeln!(s, "optimal c1              {:.12e}", p.c1);
            let _ = writeln!(s, "optimal c0              {:.12e}", p.c0);
        }
        _ => {
            let _ = writeln!(s, "best variant            none feasible; trivial bound");
        }
    }
    for w in &r.warnings {
        let _ = writeln!(s, "warning: {w}");
    }
    s.push_str("subproblems:\n");
    for v in r.variants.iter().chain(&r.dinkelbach).chain(&r.oracle) {
        solution_line(&mut s, v);
    }
    if !r.cross_checks.is_empty() {
        s.push_str("cross checks:\n");
        for c in &r.cross_checks {
            let _ = writeln!(
                s,
                "  {:<4} {:<15} relative difference {:.3e}",
                c.variant.name(),
                c.solver.to_string(),
                c.relative_difference
            );
        }
    }
    s
}
