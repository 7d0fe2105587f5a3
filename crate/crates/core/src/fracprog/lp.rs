//! Dense simplex for tiny box-bounded LPs.
//!
//! Solves `max c^T x  s.t.  A x <= b,  l <= x <= u` with a handful of
//! variables and a growing list of rows, by running the primal simplex on
//! the dual `min b^T w + u^T p - l^T q  s.t.  A^T w + p - q = c,  w, p, q >= 0`.
//! The dual has one equality per variable, so bases are `d x d`. The slack
//! basis built from `p` and `q` is always feasible and stays feasible when
//! rows are appended, which makes re-solving after a new cut a warm start.
//! The primal optimum is read off as the simplex multipliers.

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Col {
    Upper(usize),
    Lower(usize),
    Row(usize),
}

#[derive(Clone, Debug, PartialEq)]
pub enum LpStatus {
    Optimal,
    /// The dual is unbounded, i.e. no `x` satisfies the rows and the box.
    Infeasible,
    IterationLimit,
}

#[derive(Clone, Debug)]
pub struct LpSolution {
    pub status: LpStatus,
    pub x: Vec<f64>,
    pub value: f64,
    pub pivots: usize,
}

#[derive(Clone, Debug)]
pub struct Lp {
    d: usize,
    objective: Vec<f64>,
    lower: Vec<f64>,
    upper: Vec<f64>,
    rows: Vec<Vec<f64>>,
    rhs: Vec<f64>,
    basis: Vec<Col>,
}

const PIVOT_TOL: f64 = 1e-12;
const MAX_PIVOTS: usize = 20_000;

impl Lp {
    /// `objective` is maximized over the finite box `[lower, upper]`.
    pub fn new(objective: Vec<f64>, lower: Vec<f64>, upper: Vec<f64>) -> Self {
        let d = objective.len();
        assert!(lower.len() == d && upper.len() == d, "box must match objective length");
        assert!(
            lower.iter().chain(&upper).all(|v| v.is_finite()),
            "box bounds must be finite"
        );
        let basis = objective
            .iter()
            .enumerate()
            .map(|(i, &c)| if c >= 0.0 { Col::Upper(i) } else { Col::Lower(i) })
            .collect();
        Self {
            d,
            objective,
            lower,
            upper,
            rows: Vec::new(),
            rhs: Vec::new(),
            basis,
        }
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    /// Appends `row^T x <= rhs`.
    pub fn add_row(&mut self, row: Vec<f64>, rhs: f64) {
        assert_eq!(row.len(), self.d, "row length must equal the dimension");
        self.rows.push(row);
        self.rhs.push(rhs);
    }

    /// Rows appended at index `start` and later, with their right-hand sides.
    pub fn rows_from(&self, start: usize) -> impl Iterator<Item = (&[f64], f64)> + '_ {
        self.rows[start..]
            .iter()
            .zip(&self.rhs[start..])
            .map(|(r, &b)| (r.as_slice(), b))
    }

    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    /// Changes box bounds; the current basis remains dual feasible.
    pub fn set_bounds(&mut self, i: usize, lower: f64, upper: f64) {
        self.lower[i] = lower;
        self.upper[i] = upper;
    }

    fn order(&self, c: Col) -> usize {
        match c {
            Col::Upper(i) => i,
            Col::Lower(i) => self.d + i,
            Col::Row(k) => 2 * self.d + k,
        }
    }

    fn cost(&self, c: Col) -> f64 {
        match c {
            Col::Upper(i) => self.upper[i],
            Col::Lower(i) => -self.lower[i],
            Col::Row(k) => self.rhs[k],
        }
    }

    fn column(&self, c: Col, out: &mut [f64]) {
        match c {
            Col::Upper(i) => {
                out.fill(0.0);
                out[i] = 1.0;
            }
            Col::Lower(i) => {
                out.fill(0.0);
                out[i] = -1.0;
            }
            Col::Row(k) => out.copy_from_slice(&self.rows[k]),
        }
    }

    fn dot_column(&self, c: Col, pi: &[f64]) -> f64 {
        match c {
            Col::Upper(i) => pi[i],
            Col::Lower(i) => -pi[i],
            Col::Row(k) => self.rows[k].iter().zip(pi).map(|(a, b)| a * b).sum(),
        }
    }

    pub fn solve(&mut self) -> LpSolution {
        let d = self.d;
        let mut bmat = vec![0.0; d * d];
        let mut col = vec![0.0; d];
        let mut degenerate_run = 0usize;
        let ncols = 2 * d + self.rows.len();

        for pivots in 0..MAX_PIVOTS {
            for (k, &c) in self.basis.iter().enumerate() {
                self.column(c, &mut col);
                for i in 0..d {
                    bmat[i * d + k] = col[i];
                }
            }
            let lu = match Lu::factor(&bmat, d) {
                Some(lu) => lu,
                None => {
                    // numerically singular basis: restart from the slack basis
                    self.basis = self
                        .objective
                        .iter()
                        .enumerate()
                        .map(|(i, &c)| if c >= 0.0 { Col::Upper(i) } else { Col::Lower(i) })
                        .collect();
                    continue;
                }
            };
            let x_b = lu.solve(&self.objective);
            let c_b: Vec<f64> = self.basis.iter().map(|&c| self.cost(c)).collect();
            let pi = lu.solve_transposed(&c_b);
            let pi_norm = pi.iter().fold(0.0f64, |m, v| m.max(v.abs()));

            let bland = degenerate_run > 20;
            let mut entering: Option<(Col, f64)> = None;
            for idx in 0..ncols {
                let c = if idx < d {
                    Col::Upper(idx)
                } else if idx < 2 * d {
                    Col::Lower(idx - d)
                } else {
                    Col::Row(idx - 2 * d)
                };
                if self.basis.contains(&c) {
                    continue;
                }
                let cost = self.cost(c);
                let rc = cost - self.dot_column(c, &pi);
                let tol = PIVOT_TOL * (1.0 + cost.abs() + pi_norm);
                if rc < -tol {
                    if bland {
                        entering = Some((c, rc));
                        break;
                    }
                    if entering.is_none_or(|(_, best)| rc < best) {
                        entering = Some((c, rc));
                    }
                }
            }

            let Some((enter, _)) = entering else {
                let x: Vec<f64> = pi
                    .iter()
                    .enumerate()
                    .map(|(i, &v)| v.clamp(self.lower[i], self.upper[i]))
                    .collect();
                let value = self.objective.iter().zip(&x).map(|(a, b)| a * b).sum();
                return LpSolution {
                    status: LpStatus::Optimal,
                    x,
                    value,
                    pivots,
                };
            };

            self.column(enter, &mut col);
            let dir = lu.solve(&col);
            let mut leave: Option<(usize, f64)> = None;
            for k in 0..d {
                if dir[k] > PIVOT_TOL {
                    let theta = x_b[k].max(0.0) / dir[k];
                    let better = match leave {
                        None => true,
                        Some((lk, lt)) => {
                            theta < lt - 1e-15 * lt.abs().max(1.0)
                                || (theta <= lt + 1e-15 * lt.abs().max(1.0)
                                    && self.order(self.basis[k]) < self.order(self.basis[lk]))
                        }
                    };
                    if better {
                        leave = Some((k, theta));
                    }
                }
            }
            let Some((k, theta)) = leave else {
                return LpSolution {
                    status: LpStatus::Infeasible,
                    x: pi,
                    value: f64::NEG_INFINITY,
                    pivots,
                };
            };
            if theta <= 1e-14 {
                degenerate_run += 1;
            } else {
                degenerate_run = 0;
            }
            self.basis[k] = enter;
        }
        LpSolution {
            status: LpStatus::IterationLimit,
            x: vec![f64::NAN; d],
            value: f64::NAN,
            pivots: MAX_PIVOTS,
        }
    }
}

/// LU factorization with partial pivoting of a small dense matrix.
struct Lu {
    n: usize,
    lu: Vec<f64>,
    perm: Vec<usize>,
}

impl Lu {
    fn factor(a: &[f64], n: usize) -> Option<Lu> {
        let mut lu = a.to_vec();
        let mut perm: Vec<usize> = (0..n).collect();
        let scale = a.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        for k in 0..n {
            let mut p = k;
            for i in (k + 1)..n {
                if lu[i * n + k].abs() > lu[p * n + k].abs() {
                    p = i;
                }
            }
            if lu[p * n + k].abs() <= 1e-14 * scale.max(1e-300) {
                return None;
            }
            if p != k {
                for j in 0..n {
                    lu.swap(k * n + j, p * n + j);
                }
                perm.swap(k, p);
            }
            let pivot = lu[k * n + k];
            for i in (k + 1)..n {
                let f = lu[i * n + k] / pivot;
                lu[i * n + k] = f;
                for j in (k + 1)..n {
                    lu[i * n + j] -= f * lu[k * n + j];
                }
            }
        }
        Some(Lu { n, lu, perm })
    }

    /// Solves `A x = b`.
    fn solve(&self, b: &[f64]) -> Vec<f64> {
        let n = self.n;
        let mut x: Vec<f64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            for j in 0..i {
                x[i] -= self.lu[i * n + j] * x[j];
            }
        }
        for i in (0..n).rev() {
            for j in (i + 1)..n {
                x[i] -= self.lu[i * n + j] * x[j];
            }
            x[i] /= self.lu[i * n + i];
        }
        x
    }

    /// Solves `A^T x = b`.
    fn solve_transposed(&self, b: &[f64]) -> Vec<f64> {
        let n = self.n;
        let mut y = b.to_vec();
        // U^T y = b
        for i in 0..n {
            for j in 0..i {
                y[i] -= self.lu[j * n + i] * y[j];
            }
            y[i] /= self.lu[i * n + i];
        }
        // L^T z = y
        for i in (0..n).rev() {
            for j in (i + 1)..n {
                y[i] -= self.lu[j * n + i] * y[j];
            }
        }
        let mut x = vec![0.0; n];
        for (i, &p) in self.perm.iter().enumerate() {
            x[p] = y[i];
        }
        x
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: &[f64], b: &[f64]) -> bool {
        a.iter().zip(b).all(|(x, y)| (x - y).abs() < 1e-10)
    }

    #[test]
    fn box_only() {
        let mut lp = Lp::new(vec![1.0, -2.0], vec![-1.0, -3.0], vec![2.0, 5.0]);
        let s = lp.solve();
        assert_eq!(s.status, LpStatus::Optimal);
        assert!(close(&s.x, &[2.0, -3.0]));
        assert!((s.value - 8.0).abs() < 1e-12);
    }

    #[test]
    fn textbook_problem() {
        // max 3x + 5y s.t. x <= 4, 2y <= 12, 3x + 2y <= 18 -> (2, 6), value 36
        let mut lp = Lp::new(vec![3.0, 5.0], vec![0.0, 0.0], vec![100.0, 100.0]);
        lp.add_row(vec![1.0, 0.0], 4.0);
        lp.add_row(vec![0.0, 2.0], 12.0);
        lp.add_row(vec![3.0, 2.0], 18.0);
        let s = lp.solve();
        assert_eq!(s.status, LpStatus::Optimal);
        assert!(close(&s.x, &[2.0, 6.0]));
        assert!((s.value - 36.0).abs() < 1e-10);
    }

    #[test]
    fn warm_start_after_new_row() {
        let mut lp = Lp::new(vec![1.0, 1.0], vec![0.0, 0.0], vec![10.0, 10.0]);
        lp.add_row(vec![1.0, 2.0], 4.0);
        let first = lp.solve();
        assert!(close(&first.x, &[4.0, 0.0]));
        lp.add_row(vec![2.0, 1.0], 4.0);
        let s = lp.solve();
        assert!(close(&s.x, &[4.0 / 3.0, 4.0 / 3.0]));
    }

    #[test]
    fn detects_infeasible_rows() {
        let mut lp = Lp::new(vec![1.0], vec![-1.0], vec![1.0]);
        lp.add_row(vec![1.0], -2.0);
        assert_eq!(lp.solve().status, LpStatus::Infeasible);
    }

    #[test]
    fn degenerate_rows_terminate() {
        let mut lp = Lp::new(vec![1.0, 1.0, 1.0], vec![0.0; 3], vec![1.0; 3]);
        for k in 0..30 {
            let a = (k as f64 * 0.37).sin();
            lp.add_row(vec![1.0, a, -a], 0.0);
            lp.add_row(vec![-a, 1.0, a], 0.0);
        }
        let s = lp.solve();
        assert_eq!(s.status, LpStatus::Optimal);
    }
}
