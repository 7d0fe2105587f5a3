use super::matrix::{frobenius_norm, Matrix, SymmetricMatrix};
use crate::error::{Error, Result};

/// Sweep cap for the cyclic Jacobi iteration.
pub const MAX_SWEEPS: usize = 100;
/// Off-diagonal threshold relative to the Frobenius norm.
pub const OFF_DIAGONAL_TOL: f64 = 1e-14;

/// Ascending eigenvalues with matching orthonormal eigenvectors.
///
/// Column `i` of `vectors` is the unit eigenvector for `values[i]`.
#[derive(Clone, Debug)]
pub struct EigenSystem {
    pub values: Vec<f64>,
    pub vectors: Matrix,
}

impl EigenSystem {
    pub fn n(&self) -> usize {
        self.values.len()
    }

    pub fn vector(&self, i: usize) -> Vec<f64> {
        self.vectors.column(i)
    }

    /// The eigensystem of `-M`: negated values and reversed order, so the
    /// ascending convention still holds.
    pub fn reversed(&self) -> EigenSystem {
        let n = self.n();
        let values = self.values.iter().rev().map(|v| -v).collect();
        let vectors = Matrix::from_fn(n, n, |i, j| self.vectors[(i, n - 1 - j)]);
        EigenSystem { values, vectors }
    }

    /// `V diag(values) V^T`.
    pub fn reconstruct(&self) -> Matrix {
        let n = self.n();
        let v = &self.vectors;
        let mut out = Matrix::zeros(n, n);
        for k in 0..n {
            let lam = self.values[k];
            for i in 0..n {
                let a = lam * v[(i, k)];
                if a == 0.0 {
                    continue;
                }
                for j in 0..n {
                    out[(i, j)] += a * v[(j, k)];
                }
            }
        }
        out
    }
}

/// Full symmetric eigendecomposition by cyclic Jacobi rotations.
///
/// Deterministic: rotations follow a fixed row-cyclic order, eigenpairs are
/// sorted ascending (stable), and every eigenvector is signed so that its
/// largest-magnitude entry is nonnegative (lowest index wins ties).
pub fn eigh(m: &SymmetricMatrix) -> Result<EigenSystem> {
    let n = m.n();
    let mut a = m.as_matrix().clone();
    // rows of `vt` are the eigenvectors; row access keeps rotations cache friendly
    let mut vt = Matrix::identity(n);
    let threshold = OFF_DIAGONAL_TOL * frobenius_norm(&a);

    let mut converged = n == 1;
    for _ in 0..MAX_SWEEPS {
        if max_off_diagonal(&a) <= threshold {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut a, &mut vt, p, q);
            }
        }
    }
    if !converged {
        let residual = max_off_diagonal(&a);
        if residual > threshold {
            return Err(Error::NoConvergence { n, residual });
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].total_cmp(&a[(j, j)]));
    let values: Vec<f64> = order.iter().map(|&i| a[(i, i)]).collect();
    let mut vectors = Matrix::zeros(n, n);
    for (col, &src) in order.iter().enumerate() {
        let mut v = vt.row(src).to_vec();
        fix_sign(&mut v);
        for (i, x) in v.into_iter().enumerate() {
            vectors[(i, col)] = x;
        }
    }
    Ok(EigenSystem { values, vectors })
}

fn max_off_diagonal(a: &Matrix) -> f64 {
    let n = a.rows();
    let mut m: f64 = 0.0;
    for i in 0..n {
        for j in (i + 1)..n {
            m = m.max(a[(i, j)].abs());
        }
    }
    m
}

fn rotate(a: &mut Matrix, vt: &mut Matrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    if apq == 0.0 {
        return;
    }
    let n = a.rows();
    let app = a[(p, p)];
    let aqq = a[(q, q)];
    let theta = (aqq - app) / (2.0 * apq);
    let t = if theta.is_finite() {
        theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
    } else {
        // |theta| overflowed: the rotation angle is ~ 1/(2 theta)
        0.5 / theta
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;

    for k in 0..n {
        if k == p || k == q {
            continue;
        }
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        let new_kp = c * akp - s * akq;
        let new_kq = s * akp + c * akq;
        a[(k, p)] = new_kp;
        a[(p, k)] = new_kp;
        a[(k, q)] = new_kq;
        a[(q, k)] = new_kq;
    }
    a[(p, p)] = app - t * apq;
    a[(q, q)] = aqq + t * apq;
    a[(p, q)] = 0.0;
    a[(q, p)] = 0.0;

    let (rp, rq) = two_rows(vt, p, q);
    for (x, y) in rp.iter_mut().zip(rq.iter_mut()) {
        let vp = *x;
        let vq = *y;
        *x = c * vp - s * vq;
        *y = s * vp + c * vq;
    }
}

fn two_rows(m: &mut Matrix, p: usize, q: usize) -> (&mut [f64], &mut [f64]) {
    debug_assert!(p < q);
    let cols = m.cols();
    let (head, tail) = m.as_mut_slice().split_at_mut(q * cols);
    (&mut head[p * cols..(p + 1) * cols], &mut tail[..cols])
}

/// Flips `v` so its largest-magnitude entry (first on ties) is nonnegative.
pub(crate) fn fix_sign(v: &mut [f64]) {
    let mut best = 0;
    for (i, x) in v.iter().enumerate() {
        if x.abs() > v[best].abs() {
            best = i;
        }
    }
    if v.get(best).is_some_and(|&x| x < 0.0) {
        v.iter_mut().for_each(|x| *x = -*x);
    }
}

/// Lower-triangular `L` with `L L^T = m`.
pub fn cholesky(m: &SymmetricMatrix) -> Result<Matrix> {
    let n = m.n();
    let a = m.as_matrix();
    let mut l = Matrix::zeros(n, n);
    for j in 0..n {
        let mut d = a[(j, j)];
        for k in 0..j {
            d -= l[(j, k)] * l[(j, k)];
        }
        if !(d > 0.0) {
            return Err(Error::NotPositiveDefinite { pivot: j });
        }
        let djj = d.sqrt();
        l[(j, j)] = djj;
        for i in (j + 1)..n {
            let mut s = a[(i, j)];
            for k in 0..j {
                s -= l[(i, k)] * l[(j, k)];
            }
            l[(i, j)] = s / djj;
        }
    }
    Ok(l)
}
