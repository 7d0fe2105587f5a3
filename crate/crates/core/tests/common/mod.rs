#![allow(dead_code)]

use dkext::models::Normals;
use dkext::{eigh, Matrix, SymmetricMatrix};
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

pub fn rng(seed: u64) -> ChaCha20Rng {
    ChaCha20Rng::seed_from_u64(seed)
}

pub fn gaussian(rows: usize, cols: usize, rng: &mut ChaCha20Rng) -> Matrix {
    let mut z = Normals::new(rng);
    Matrix::from_fn(rows, cols, |_, _| z.sample())
}

pub fn random_symmetric(n: usize, rng: &mut ChaCha20Rng) -> SymmetricMatrix {
    let g = gaussian(n, n, rng);
    SymmetricMatrix::symmetrized(&g.add(&g.transpose()).unwrap().scaled(0.5)).unwrap()
}

pub fn random_orthogonal(n: usize, rng: &mut ChaCha20Rng) -> Matrix {
    eigh(&random_symmetric(n, rng)).unwrap().vectors
}

/// `Q diag(values) Q^T`.
pub fn with_spectrum(q: &Matrix, values: &[f64]) -> SymmetricMatrix {
    let qd = q.matmul(&Matrix::from_diagonal(values)).unwrap();
    SymmetricMatrix::symmetrized(&qd.matmul(&q.transpose()).unwrap()).unwrap()
}

/// Distinct values with gaps of at least `min_gap`.
pub fn separated_values(n: usize, min_gap: f64, rng: &mut ChaCha20Rng) -> Vec<f64> {
    use rand::Rng;
    let mut x = rng.random_range(-5.0..5.0);
    (0..n)
        .map(|_| {
            x += min_gap + rng.random_range(0.0..1.0);
            x
        })
        .collect()
}
