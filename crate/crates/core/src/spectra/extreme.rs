//! Extreme eigenpairs via Householder tridiagonalization, Sturm bisection and
//! inverse iteration. Much cheaper than a full decomposition when only the
//! spectral norm and its eigenvector are needed.

use super::jacobi::fix_sign;
use super::matrix::{norm2, SymmetricMatrix};

/// An eigenvalue with its unit eigenvector.
#[derive(Clone, Debug)]
pub struct EigenPair {
    pub value: f64,
    pub vector: Vec<f64>,
}

/// Smallest and largest eigenpairs of a symmetric matrix.
#[derive(Clone, Debug)]
pub struct Extremes {
    pub min: EigenPair,
    pub max: EigenPair,
}

/// `max |lambda_i|` with the achieving unit eigenvector and the sign of the
/// achieving eigenvalue (+1 for ties and for the zero matrix).
#[derive(Clone, Debug)]
pub struct SpectralNorm {
    pub value: f64,
    pub vector: Vec<f64>,
    pub sign: f64,
}

struct Tridiagonal {
    d: Vec<f64>,
    e: Vec<f64>,
    // reflector k acts on coordinates k+1.. and is stored unit-length (or empty)
    reflectors: Vec<Vec<f64>>,
}

fn tridiagonalize(m: &SymmetricMatrix) -> Tridiagonal {
    let n = m.n();
    let mut a = m.as_matrix().clone().into_vec();
    let mut reflectors = Vec::with_capacity(n.saturating_sub(2));
    let mut e = vec![0.0; n.saturating_sub(1)];
    let mut p = vec![0.0; n];

    for k in 0..n.saturating_sub(2) {
        let len = n - k - 1;
        let mut v: Vec<f64> = (0..len).map(|i| a[(k + 1 + i) * n + k]).collect();
        let xnorm = norm2(&v);
        if xnorm == 0.0 {
            e[k] = 0.0;
            reflectors.push(Vec::new());
            continue;
        }
        let alpha = if v[0] > 0.0 { -xnorm } else { xnorm };
        v[0] -= alpha;
        let vnorm = norm2(&v);
        if vnorm == 0.0 {
            e[k] = v[0] + alpha;
            reflectors.push(Vec::new());
            continue;
        }
        v.iter_mut().for_each(|x| *x /= vnorm);
        e[k] = alpha;

        // p = A22 v, then q = p - (v^T p) v, A22 -= 2 (v q^T + q v^T)
        let off = k + 1;
        for i in 0..len {
            let row = &a[(off + i) * n + off..(off + i) * n + n];
            p[i] = row.iter().zip(&v).map(|(x, y)| x * y).sum();
        }
        let kk: f64 = p[..len].iter().zip(&v).map(|(x, y)| x * y).sum();
        for i in 0..len {
            p[i] -= kk * v[i];
        }
        for i in 0..len {
            let vi = 2.0 * v[i];
            let qi = 2.0 * p[i];
            let row = &mut a[(off + i) * n + off..(off + i) * n + n];
            for (jj, x) in row.iter_mut().enumerate() {
                *x -= vi * p[jj] + qi * v[jj];
            }
        }
        reflectors.push(v);
    }
    if n >= 2 {
        e[n - 2] = a[(n - 1) * n + n - 2];
    }
    let d = (0..n).map(|i| a[i * n + i]).collect();
    Tridiagonal { d, e, reflectors }
}

impl Tridiagonal {
    fn n(&self) -> usize {
        self.d.len()
    }

    /// Number of eigenvalues strictly below `x`.
    fn count_below(&self, x: f64) -> usize {
        let mut count = 0;
        let mut q = 1.0;
        for i in 0..self.n() {
            let e2 = if i == 0 { 0.0 } else { self.e[i - 1] * self.e[i - 1] };
            q = self.d[i] - x - if i == 0 { 0.0 } else { e2 / q };
            if q == 0.0 {
                q = -f64::MIN_POSITIVE;
            }
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }

    fn gershgorin(&self) -> (f64, f64) {
        let n = self.n();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let mut r = 0.0;
            if i > 0 {
                r += self.e[i - 1].abs();
            }
            if i + 1 < n {
                r += self.e[i].abs();
            }
            lo = lo.min(self.d[i] - r);
            hi = hi.max(self.d[i] + r);
        }
        (lo, hi)
    }

    /// The largest (`top`) or smallest eigenvalue by bisection to roundoff.
    fn extreme_value(&self, top: bool) -> f64 {
        let n = self.n();
        let (mut lo, mut hi) = self.gershgorin();
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            let below = self.count_below(mid);
            let go_left = if top { below == n } else { below >= 1 };
            if go_left {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    }

    /// Inverse iteration for the eigenvalue `lambda` at one end of the spectrum,
    /// shifted just outside so `T - sigma I` is definite and `LDL^T` is stable.
    fn extreme_vector(&self, lambda: f64, top: bool, scale: f64) -> Vec<f64> {
        let n = self.n();
        if n == 1 || scale == 0.0 {
            let mut v = vec![0.0; n];
            v[0] = 1.0;
            return v;
        }
        let shift = 1e-10 * scale;
        let sigma = if top { lambda + shift } else { lambda - shift };
        let mut piv = vec![0.0; n];
        let mut l = vec![0.0; n - 1];
        piv[0] = self.d[0] - sigma;
        for i in 1..n {
            let prev = if piv[i - 1] == 0.0 {
                f64::MIN_POSITIVE
            } else {
                piv[i - 1]
            };
            l[i - 1] = self.e[i - 1] / prev;
            piv[i] = self.d[i] - sigma - l[i - 1] * self.e[i - 1];
        }
        let tiny = f64::MIN_POSITIVE * scale.max(1.0);
        for p in piv.iter_mut() {
            if p.abs() < tiny {
                *p = if top { -tiny } else { tiny };
            }
        }
        let mut x: Vec<f64> = (0..n).map(|i| 1.0 + 0.5 * ((i as f64) * 0.73).sin()).collect();
        for _ in 0..4 {
            for i in 1..n {
                x[i] -= l[i - 1] * x[i - 1];
            }
            for i in 0..n {
                x[i] /= piv[i];
            }
            for i in (0..n - 1).rev() {
                x[i] -= l[i] * x[i + 1];
            }
            let nrm = norm2(&x);
            if !(nrm.is_finite() && nrm > 0.0) {
                break;
            }
            x.iter_mut().for_each(|v| *v /= nrm);
        }
        x
    }

    fn back_transform(&self, z: &mut [f64]) {
        for (k, v) in self.reflectors.iter().enumerate().rev() {
            if v.is_empty() {
                continue;
            }
            let seg = &mut z[k + 1..];
            let dotp: f64 = seg.iter().zip(v).map(|(a, b)| a * b).sum();
            for (a, b) in seg.iter_mut().zip(v) {
                *a -= 2.0 * dotp * b;
            }
        }
    }
}

fn pair(t: &Tridiagonal, top: bool, scale: f64) -> EigenPair {
    pair_with_value(t, t.extreme_value(top), top, scale)
}

fn scale_of(t: &Tridiagonal) -> f64 {
    let (lo, hi) = t.gershgorin();
    lo.abs().max(hi.abs())
}

/// Smallest and largest eigenpairs.
pub fn extreme_eigenpairs(m: &SymmetricMatrix) -> Extremes {
    let t = tridiagonalize(m);
    let scale = scale_of(&t);
    Extremes {
        min: pair(&t, false, scale),
        max: pair(&t, true, scale),
    }
}

/// Largest and smallest eigenvalues only.
pub fn extreme_eigenvalues(m: &SymmetricMatrix) -> (f64, f64) {
    let t = tridiagonalize(m);
    (t.extreme_value(false), t.extreme_value(true))
}

/// Spectral (operator two-) norm of a symmetric matrix.
pub fn spectral_norm(m: &SymmetricMatrix) -> SpectralNorm {
    let t = tridiagonalize(m);
    let scale = scale_of(&t);
    let lo = t.extreme_value(false);
    let hi = t.extreme_value(true);
    let top = hi.abs() >= lo.abs();
    let p = pair_with_value(&t, if top { hi } else { lo }, top, scale);
    SpectralNorm {
        value: p.value.abs(),
        vector: p.vector,
        sign: if top { 1.0 } else { -1.0 },
    }
}

fn pair_with_value(t: &Tridiagonal, value: f64, top: bool, scale: f64) -> EigenPair {
    let mut vector = t.extreme_vector(value, top, scale);
    t.back_transform(&mut vector);
    let nrm = norm2(&vector);
    if nrm > 0.0 {
        vector.iter_mut().for_each(|x| *x /= nrm);
    }
    fix_sign(&mut vector);
    EigenPair { value, vector }
}

/// Spectral norm value alone.
pub fn spectral_norm_value(m: &SymmetricMatrix) -> f64 {
    let (lo, hi) = extreme_eigenvalues(m);
    lo.abs().max(hi.abs())
}
