//! Kelley's cutting-plane method over a small LP master problem.

use std::fmt::Write as _;

use super::lp::{Lp, LpStatus};

/// A linear cut `coeffs^T x <= rhs`.
#[derive(Clone, Debug)]
pub struct Cut {
    pub coeffs: Vec<f64>,
    pub rhs: f64,
}

/// What the problem reports about an LP iterate.
#[derive(Clone, Debug, Default)]
pub struct Probe {
    /// True objective of a feasible point derived from the iterate, if any.
    pub value: Option<f64>,
    /// Cuts separating the iterate from the feasible set.
    pub cuts: Vec<Cut>,
    /// Extra number shown in the trace (for example a Dinkelbach lambda).
    pub note: Option<f64>,
}

pub trait Separator {
    fn probe(&mut self, x: &[f64]) -> Probe;
}

#[derive(Clone, Debug)]
pub struct KelleyOptions {
    /// Stop when `upper - best <= tol * (1 + |best|)`.
    pub tol: f64,
    pub max_iter: usize,
    /// How many times box faces may be pushed out by a factor of 10.
    pub max_growth: usize,
    /// Variables whose box may grow when an optimum pins a face.
    pub growable: Vec<bool>,
    pub trace: bool,
}

impl Default for KelleyOptions {
    fn default() -> Self {
        Self {
            tol: 1e-10,
            max_iter: 2000,
            max_growth: 3,
            growable: Vec::new(),
            trace: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum KelleyStatus {
    Converged,
    IterationLimit,
    /// The iterate is feasible but no incumbent could be certified.
    Stalled,
    Infeasible,
}

#[derive(Clone, Debug)]
pub struct KelleyResult {
    pub status: KelleyStatus,
    pub best_x: Option<Vec<f64>>,
    pub best_value: f64,
    pub upper_bound: f64,
    pub iterations: usize,
    pub cuts: usize,
    pub last_x: Vec<f64>,
    pub trace: String,
}

impl KelleyResult {
    pub fn gap(&self) -> f64 {
        self.upper_bound - self.best_value
    }
}

/// Runs the cutting-plane loop on `lp`, which already carries the problem's
/// fixed linear rows. `seed` points are probed first to warm the incumbent
/// and cut pool.
pub fn kelley<S: Separator>(lp: &mut Lp, sep: &mut S, seeds: &[Vec<f64>], opts: &KelleyOptions) -> KelleyResult {
    let mut best_value = f64::NEG_INFINITY;
    let mut best_x: Option<Vec<f64>> = None;
    let mut trace = String::new();
    let mut cuts = 0usize;
    let mut growth = 0usize;
    let d = lp.dim();

    for s in seeds {
        let p = sep.probe(s);
        if let Some(v) = p.value {
            if v > best_value {
                best_value = v;
                best_x = Some(s.clone());
            }
        }
        for c in p.cuts {
            lp.add_row(c.coeffs, c.rhs);
            cuts += 1;
        }
    }

    let mut upper = f64::INFINITY;
    let mut last_x = vec![0.0; d];
    for it in 1..=opts.max_iter {
        let sol = lp.solve();
        match sol.status {
            LpStatus::Optimal => {}
            LpStatus::Infeasible => {
                return KelleyResult {
                    status: KelleyStatus::Infeasible,
                    best_x,
                    best_value,
                    upper_bound: f64::NEG_INFINITY,
                    iterations: it,
                    cuts,
                    last_x,
                    trace,
                };
            }
            LpStatus::IterationLimit => {
                return KelleyResult {
                    status: KelleyStatus::IterationLimit,
                    best_x,
                    best_value,
                    upper_bound: upper,
                    iterations: it,
                    cuts,
                    last_x,
                    trace,
                };
            }
        }
        upper = sol.value;
        last_x = sol.x.clone();

        if growth < opts.max_growth && pins_box(lp, &sol.x, &opts.growable) {
            growth += 1;
            for i in 0..d {
                if opts.growable.get(i).copied().unwrap_or(false) {
                    let (lo, hi) = (lp.lower()[i], lp.upper()[i]);
                    lp.set_bounds(i, lo * 10.0, hi * 10.0);
                }
            }
            continue;
        }

        let probe = sep.probe(&sol.x);
        if let Some(v) = probe.value {
            if v > best_value {
                best_value = v;
                best_x = Some(sol.x.clone());
            }
        }
        if opts.trace {
            let _ = writeln!(
                trace,
                "iter={it} incumbent={best_value:.12e} lp={upper:.12e} cuts={cuts} lambda={}",
                probe.note.map_or("-".to_string(), |l| format!("{l:.12e}"))
            );
        }
        if best_value > f64::NEG_INFINITY && upper - best_value <= opts.tol * (1.0 + best_value.abs()) {
            return KelleyResult {
                status: KelleyStatus::Converged,
                best_x,
                best_value,
                upper_bound: upper,
                iterations: it,
                cuts,
                last_x,
                trace,
            };
        }
        if probe.cuts.is_empty() {
            return KelleyResult {
                status: KelleyStatus::Stalled,
                best_x,
                best_value,
                upper_bound: upper,
                iterations: it,
                cuts,
                last_x,
                trace,
            };
        }
        for c in probe.cuts {
            lp.add_row(c.coeffs, c.rhs);
            cuts += 1;
        }
    }
    KelleyResult {
        status: KelleyStatus::IterationLimit,
        best_x,
        best_value,
        upper_bound: upper,
        iterations: opts.max_iter,
        cuts,
        last_x,
        trace,
    }
}

fn pins_box(lp: &Lp, x: &[f64], growable: &[bool]) -> bool {
    x.iter().enumerate().any(|(i, &v)| {
        if !growable.get(i).copied().unwrap_or(false) {
            return false;
        }
        let (lo, hi) = (lp.lower()[i], lp.upper()[i]);
        (hi != 0.0 && v >= hi * (1.0 - 1e-9)) || (lo != 0.0 && v <= lo * (1.0 - 1e-9))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// max x + y over the unit disc; optimum sqrt(2).
    struct Disc;

    impl Separator for Disc {
        fn probe(&mut self, x: &[f64]) -> Probe {
            let r = (x[0] * x[0] + x[1] * x[1]).sqrt();
            if r == 0.0 {
                return Probe::default();
            }
            let u = [x[0] / r, x[1] / r];
            let scale = r.max(1.0);
            Probe {
                value: Some((x[0] + x[1]) / scale),
                cuts: if r > 1.0 + 1e-15 {
                    vec![Cut {
                        coeffs: u.to_vec(),
                        rhs: 1.0,
                    }]
                } else {
                    Vec::new()
                },
                note: None,
            }
        }
    }

    #[test]
    fn disc_maximum() {
        let mut lp = Lp::new(vec![1.0, 1.0], vec![-10.0, -10.0], vec![10.0, 10.0]);
        let opts = KelleyOptions {
            tol: 1e-12,
            trace: true,
            ..KelleyOptions::default()
        };
        let res = kelley(&mut lp, &mut Disc, &[], &opts);
        assert_eq!(res.status, KelleyStatus::Converged);
        assert!((res.best_value - 2f64.sqrt()).abs() < 1e-11);
        assert!(res.gap() <= 1e-12 * (1.0 + res.best_value));
        assert!(res.trace.lines().count() == res.iterations);
    }

    #[test]
    fn grows_pinned_box() {
        let mut lp = Lp::new(vec![1.0, 1.0], vec![-0.1, -0.1], vec![0.1, 0.1]);
        let opts = KelleyOptions {
            tol: 1e-12,
            growable: vec![true, true],
            ..KelleyOptions::default()
        };
        let res = kelley(&mut lp, &mut Disc, &[], &opts);
        assert!((res.best_value - 2f64.sqrt()).abs() < 1e-11);
    }
}
