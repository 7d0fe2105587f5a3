//! Eigenvector blocks and the distances between the subspaces they span.

use crate::error::{Error, Result};
use crate::spectra::{eigh, EigenSystem, Matrix, SymmetricMatrix};

/// `r` consecutive orthonormal eigenvectors, columns `j+1..=j+r` (1-based)
/// of an eigensystem.
#[derive(Clone, Debug)]
pub struct EigenvectorBlock {
    pub j: usize,
    pub r: usize,
    pub basis: Matrix,
}

impl EigenvectorBlock {
    pub fn n(&self) -> usize {
        self.basis.rows()
    }
}

/// Selects the block at offset `j` and width `r`. With `reverse`, eigenvalues
/// are taken in descending order, so `j = 1, r = 2` addresses the second and
/// third largest.
pub fn block(es: &EigenSystem, j: usize, r: usize, reverse: bool) -> Result<EigenvectorBlock> {
    let n = es.n();
    if r == 0 || j + r > n {
        return Err(Error::IndexOutOfRange(format!(
            "block j={j}, r={r} does not fit in n={n}"
        )));
    }
    let basis = if reverse {
        Matrix::from_fn(n, r, |i, k| es.vectors[(i, n - 1 - (j + k))])
    } else {
        es.vectors.columns(j, r)
    };
    Ok(EigenvectorBlock { j, r, basis })
}

/// `sqrt(2 min(r, n - r))`.
pub fn scaling_constant(n: usize, r: usize) -> f64 {
    (2.0 * r.min(n - r) as f64).sqrt()
}

/// The trivial bound: 1 on the rescaled scale, `scaling_constant(n, r)` raw.
pub fn trivial_bound() -> f64 {
    1.0
}

pub fn trivial_bound_raw(n: usize, r: usize) -> f64 {
    scaling_constant(n, r)
}

fn check_conformable(w: &EigenvectorBlock, v: &EigenvectorBlock) -> Result<()> {
    if w.basis.rows() != v.basis.rows() || w.basis.cols() != v.basis.cols() {
        return Err(Error::DimensionMismatch(format!(
            "blocks are {}x{} and {}x{}",
            w.basis.rows(),
            w.basis.cols(),
            v.basis.rows(),
            v.basis.cols()
        )));
    }
    Ok(())
}

/// Cosines of the principal angles: singular values of `W^T V`, clamped to
/// `[0, 1]`, in descending order.
pub fn principal_cosines(w: &EigenvectorBlock, v: &EigenvectorBlock) -> Result<Vec<f64>> {
    check_conformable(w, v)?;
    let c = w.basis.tr_matmul(&v.basis)?;
    let gram = SymmetricMatrix::symmetrized(&c.tr_matmul(&c)?)?;
    let es = eigh(&gram)?;
    let mut s: Vec<f64> = es.values.iter().map(|&x| x.max(0.0).sqrt().min(1.0)).collect();
    s.reverse();
    Ok(s)
}

/// Sines of the principal angles, ascending, computed from
/// `X = W^T (I - V V^T)` so that nearly equal subspaces keep full relative
/// accuracy.
pub fn principal_sines(w: &EigenvectorBlock, v: &EigenvectorBlock) -> Result<Vec<f64>> {
    check_conformable(w, v)?;
    let n = w.n();
    let r = w.r;
    let wtv = w.basis.tr_matmul(&v.basis)?;
    // X = W^T - (W^T V) V^T, r x n
    let mut x = w.basis.transpose();
    for a in 0..r {
        for i in 0..n {
            let mut s = 0.0;
            for k in 0..r {
                s += wtv[(a, k)] * v.basis[(i, k)];
            }
            x[(a, i)] -= s;
        }
    }
    let xxt = SymmetricMatrix::symmetrized(&x.matmul(&x.transpose())?)?;
    let es = eigh(&xxt)?;
    Ok(es.values.iter().map(|&s2| s2.max(0.0).sqrt().min(1.0)).collect())
}

/// `inf over orthogonal R of ||W - V R||_F`, i.e. `sqrt(2 (r - sum cos))`.
///
/// Evaluated as `sqrt(sum 2 s^2 / (1 + sqrt(1 - s^2)))` over the principal
/// sines, which is the same quantity without cancellation.
pub fn rho1(w: &EigenvectorBlock, v: &EigenvectorBlock) -> Result<f64> {
    let sines = principal_sines(w, v)?;
    let sum: f64 = sines
        .iter()
        .map(|&s| 2.0 * s * s / (1.0 + (1.0 - s * s).max(0.0).sqrt()))
        .sum();
    Ok(sum.sqrt())
}

/// `||W W^T (I - V V^T)||_2`, the sine of the largest principal angle.
pub fn rho2(w: &EigenvectorBlock, v: &EigenvectorBlock) -> Result<f64> {
    let sines = principal_sines(w, v)?;
    Ok(sines.last().copied().unwrap_or(0.0))
}

/// `rho1` via the cosine formula, kept as an independent cross-check.
pub fn rho1_from_cosines(w: &EigenvectorBlock, v: &EigenvectorBlock) -> Result<f64> {
    let cos = principal_cosines(w, v)?;
    let radicand = 2.0 * (w.r as f64 - cos.iter().sum::<f64>());
    Ok(if radicand >= -1e-12 {
        radicand.max(0.0).sqrt()
    } else {
        f64::NAN
    })
}

/// `rho2` as `sqrt(1 - cos_min^2)`.
pub fn rho2_from_cosines(w: &EigenvectorBlock, v: &EigenvectorBlock) -> Result<f64> {
    let cos = principal_cosines(w, v)?;
    let cmin = cos.last().copied().unwrap_or(1.0);
    Ok((1.0 - cmin * cmin).max(0.0).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn line(v: &[f64]) -> EigenvectorBlock {
        EigenvectorBlock {
            j: 0,
            r: 1,
            basis: Matrix::from_columns(&[v.to_vec()]).unwrap(),
        }
    }

    #[test]
    fn block_selection() {
        let es = eigh(&SymmetricMatrix::from_diagonal(&[1.0, 2.0, 3.0]).unwrap()).unwrap();
        assert_eq!(block(&es, 0, 1, false).unwrap().basis.column(0), vec![1.0, 0.0, 0.0]);
        assert_eq!(block(&es, 0, 1, true).unwrap().basis.column(0), vec![0.0, 0.0, 1.0]);
        let b = block(&es, 1, 2, false).unwrap();
        assert_eq!(b.basis.column(0), vec![0.0, 1.0, 0.0]);
        assert_eq!(b.basis.column(1), vec![0.0, 0.0, 1.0]);
        assert!(block(&es, 2, 2, false).is_err());
        assert!(block(&es, 0, 0, false).is_err());
    }

    #[test]
    fn scaling_constant_values() {
        assert!((scaling_constant(4, 1) - std::f64::consts::SQRT_2).abs() < 1e-8);
        assert!((scaling_constant(6, 3) - 6f64.sqrt()).abs() < 1e-15);
        assert!((scaling_constant(2, 1) - 2f64.sqrt()).abs() < 1e-15);
        assert_eq!(trivial_bound(), 1.0);
        assert!((trivial_bound_raw(4, 1) - 2f64.sqrt()).abs() < 1e-15);
        assert!((trivial_bound_raw(6, 3) - 6f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn identical_blocks() {
        let w = line(&[0.6, 0.8]);
        assert_eq!(principal_cosines(&w, &w).unwrap(), vec![1.0]);
        assert!(rho1(&w, &w).unwrap() < 1e-15);
        assert!(rho2(&w, &w).unwrap() < 1e-15);
    }

    #[test]
    fn orthogonal_lines() {
        let w = line(&[1.0, 0.0]);
        let v = line(&[0.0, 1.0]);
        assert_eq!(principal_cosines(&w, &v).unwrap(), vec![0.0]);
        assert!((rho1(&w, &v).unwrap() - 2f64.sqrt()).abs() < 1e-15);
        assert!((rho2(&w, &v).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn lines_at_45_degrees() {
        let w = line(&[1.0, 0.0]);
        let v = line(&[FRAC_1_SQRT_2, FRAC_1_SQRT_2]);
        // the only orthogonal 1x1 alignments are +-1; +1 is the better one
        let brute = [1.0f64, -1.0]
            .iter()
            .map(|q| ((1.0 - q * FRAC_1_SQRT_2).powi(2) + (q * FRAC_1_SQRT_2).powi(2)).sqrt())
            .fold(f64::INFINITY, f64::min);
        assert!((principal_cosines(&w, &v).unwrap()[0] - FRAC_1_SQRT_2).abs() < 1e-15);
        assert!((rho1(&w, &v).unwrap() - brute).abs() < 1e-15);
        assert!((rho1(&w, &v).unwrap() - 0.765_366_864_7).abs() < 1e-9);
        // P_W (I - P_V) = [[1/2, -1/2], [0, 0]] has two-norm 1/sqrt(2)
        assert!((rho2(&w, &v).unwrap() - FRAC_1_SQRT_2).abs() < 1e-15);
    }
}
