//! Random matrix models for the experiments: stochastic blockmodel graphs
//! with their shift operators and expectation-level generating matrices,
//! and the spiked covariance model with sample covariance estimates.
//!
//! Randomness comes from ChaCha20 streams keyed by
//! `(master_seed, scenario, replicate, attempt)`, so any replicate can be
//! regenerated in isolation.

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;

use crate::error::{Error, Result};
use crate::spectra::{cholesky, Matrix, SymmetricMatrix};

fn fnv1a(s: &str) -> u64 {
    s.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| {
        (h ^ u64::from(b)).wrapping_mul(0x0000_0100_0000_01b3)
    })
}

/// The ChaCha20 stream for one replicate. Distinct key tuples give
/// independent streams; `attempt` separates resamples of a replicate.
pub fn stream(master_seed: u64, scenario: &str, replicate: u64, attempt: u64) -> ChaCha20Rng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&master_seed.to_le_bytes());
    key[8..16].copy_from_slice(&fnv1a(scenario).to_le_bytes());
    key[16..24].copy_from_slice(&replicate.to_le_bytes());
    key[24..].copy_from_slice(&attempt.to_le_bytes());
    ChaCha20Rng::from_seed(key)
}

/// Standard normal variates by the Box–Muller transform.
pub struct Normals<'r, R: RngCore> {
    rng: &'r mut R,
    spare: Option<f64>,
}

impl<'r, R: RngCore> Normals<'r, R> {
    pub fn new(rng: &'r mut R) -> Self {
        Self { rng, spare: None }
    }

    pub fn sample(&mut self) -> f64 {
        if let Some(z) = self.spare.take() {
            return z;
        }
        // u1 in (0, 1] keeps the logarithm finite
        let u1 = 1.0 - self.rng.random::<f64>();
        let u2 = self.rng.random::<f64>();
        let radius = (-2.0 * u1.ln()).sqrt();
        let angle = 2.0 * std::f64::consts::PI * u2;
        self.spare = Some(radius * angle.sin());
        radius * angle.cos()
    }
}

/// `k` block sizes summing to `n`; the first `n mod k` blocks get one extra
/// node.
pub fn equal_blocks(n: usize, k: usize) -> Result<Vec<usize>> {
    if k == 0 || k > n {
        return Err(Error::InvalidParameter(format!(
            "cannot split {n} nodes into {k} non-empty blocks"
        )));
    }
    Ok((0..k).map(|i| n / k + usize::from(i < n % k)).collect())
}

/// Block label of every node.
pub fn memberships(block_sizes: &[usize]) -> Vec<usize> {
    block_sizes
        .iter()
        .enumerate()
        .flat_map(|(b, &s)| std::iter::repeat_n(b, s))
        .collect()
}

fn check_probability(name: &str, p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("{name} = {p} is not in [0, 1]")))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SbmParams {
    pub block_sizes: Vec<usize>,
    pub p_within: f64,
    pub p_between: f64,
}

impl SbmParams {
    pub fn new(block_sizes: Vec<usize>, p_within: f64, p_between: f64) -> Result<Self> {
        check_probability("p_within", p_within)?;
        check_probability("p_between", p_between)?;
        if block_sizes.is_empty() || block_sizes.contains(&0) {
            return Err(Error::InvalidParameter("block sizes must be positive".into()));
        }
        let params = Self {
            block_sizes,
            p_within,
            p_between,
        };
        if params.n() < 2 {
            return Err(Error::InvalidParameter("need at least 2 nodes".into()));
        }
        Ok(params)
    }

    pub fn equal(n: usize, k: usize, p_within: f64, p_between: f64) -> Result<Self> {
        Self::new(equal_blocks(n, k)?, p_within, p_between)
    }

    pub fn n(&self) -> usize {
        self.block_sizes.iter().sum()
    }

    /// Edge probability between nodes in blocks `a` and `b`.
    pub fn probability(&self, a: usize, b: usize) -> f64 {
        if a == b {
            self.p_within
        } else {
            self.p_between
        }
    }
}

/// Adjacency matrix, Laplacian `L = D - A` and normalized Laplacian
/// `L_sym = D^{-1/2} L D^{-1/2}` of a simple undirected graph.
#[derive(Clone, Debug)]
pub struct GraphOperators {
    pub a: SymmetricMatrix,
    pub l: SymmetricMatrix,
    pub l_sym: SymmetricMatrix,
    pub degrees: Vec<usize>,
}

impl GraphOperators {
    /// Fails with [`Error::ZeroDegree`] on the first isolated vertex.
    pub fn from_adjacency(a: SymmetricMatrix) -> Result<Self> {
        let n = a.n();
        let m = a.as_matrix();
        let mut degrees = Vec::with_capacity(n);
        for i in 0..n {
            let mut d = 0usize;
            for j in 0..n {
                let x = m[(i, j)];
                if !(x == 0.0 || x == 1.0) || (i == j && x != 0.0) {
                    return Err(Error::InvalidParameter(format!(
                        "adjacency entry ({i}, {j}) = {x} is not a simple-graph entry"
                    )));
                }
                d += usize::from(x == 1.0);
            }
            degrees.push(d);
        }
        if let Some(vertex) = degrees.iter().position(|&d| d == 0) {
            return Err(Error::ZeroDegree { vertex });
        }
        let degf: Vec<f64> = degrees.iter().map(|&d| d as f64).collect();
        let (l, l_sym) = laplacians(&a, &degf);
        Ok(Self { a, l, l_sym, degrees })
    }
}

fn laplacians(a: &SymmetricMatrix, degrees: &[f64]) -> (SymmetricMatrix, SymmetricMatrix) {
    let n = a.n();
    let m = a.as_matrix();
    let inv_sqrt: Vec<f64> = degrees.iter().map(|d| 1.0 / d.sqrt()).collect();
    let l = Matrix::from_fn(n, n, |i, j| if i == j { degrees[i] - m[(i, j)] } else { -m[(i, j)] });
    let l_sym = Matrix::from_fn(n, n, |i, j| inv_sqrt[i] * l[(i, j)] * inv_sqrt[j]);
    (
        SymmetricMatrix::symmetrized(&l).expect("square by construction"),
        SymmetricMatrix::symmetrized(&l_sym).expect("square by construction"),
    )
}

/// Draws the upper triangle by independent Bernoulli trials and mirrors it.
pub fn sample_sbm<R: RngCore>(params: &SbmParams, rng: &mut R) -> Result<GraphOperators> {
    let n = params.n();
    let labels = memberships(&params.block_sizes);
    let mut a = Matrix::zeros(n, n);
    for i in 0..n {
        for j in i + 1..n {
            let p = params.probability(labels[i], labels[j]);
            if rng.random::<f64>() < p {
                a[(i, j)] = 1.0;
                a[(j, i)] = 1.0;
            }
        }
    }
    GraphOperators::from_adjacency(SymmetricMatrix::new(a)?)
}

/// Samples until the graph has no isolated vertex, using streams
/// `attempt = 0, 1, ...` of the replicate. Returns the operators and the
/// number of attempts used; fails after `max_attempts`.
pub fn sample_sbm_resampling(
    params: &SbmParams,
    master_seed: u64,
    scenario: &str,
    replicate: u64,
    max_attempts: u64,
) -> Result<(GraphOperators, u64)> {
    let mut last = None;
    for attempt in 0..max_attempts {
        let mut rng = stream(master_seed, scenario, replicate, attempt);
        match sample_sbm(params, &mut rng) {
            Ok(ops) => return Ok((ops, attempt + 1)),
            Err(e @ Error::ZeroDegree { .. }) => last = Some(e),
            Err(e) => return Err(e),
        }
    }
    Err(last.unwrap_or_else(|| Error::InvalidParameter("max_attempts must be positive".into())))
}

pub const MAX_RESAMPLE_ATTEMPTS: u64 = 100;

/// Expectation-level counterparts of the shift operators.
#[derive(Clone, Debug)]
pub struct GeneratingMatrices {
    pub b_a: SymmetricMatrix,
    pub b_l: SymmetricMatrix,
    pub b_lsym: SymmetricMatrix,
}

/// `B_A = M P M^T - diag(M P M^T)`, `B_L = diag(B_A 1) - B_A` and
/// `B_Lsym = diag(B_A 1)^{-1/2} B_L diag(B_A 1)^{-1/2}`.
pub fn generating_matrices(params: &SbmParams) -> Result<GeneratingMatrices> {
    let n = params.n();
    let labels = memberships(&params.block_sizes);
    let b_a = Matrix::from_fn(n, n, |i, j| {
        if i == j {
            0.0
        } else {
            params.probability(labels[i], labels[j])
        }
    });
    let degrees: Vec<f64> = (0..n).map(|i| b_a.row(i).iter().sum()).collect();
    if let Some(vertex) = degrees.iter().position(|&d| d <= 0.0) {
        return Err(Error::ZeroDegree { vertex });
    }
    let b_a = SymmetricMatrix::symmetrized(&b_a)?;
    let (b_l, b_lsym) = laplacians(&b_a, &degrees);
    Ok(GeneratingMatrices { b_a, b_l, b_lsym })
}

pub fn degree_extreme_difference(ops: &GraphOperators) -> usize {
    let max = ops.degrees.iter().copied().max().unwrap_or(0);
    let min = ops.degrees.iter().copied().min().unwrap_or(0);
    max - min
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpikedCovParams {
    pub p: usize,
    /// Latent dimension, the number of blocks.
    pub r_spike: usize,
    pub block_sizes: Vec<usize>,
    pub p_within: f64,
    pub p_between: f64,
    pub samples: usize,
}

impl SpikedCovParams {
    /// Equal blocks over `p` coordinates.
    pub fn equal(p: usize, r_spike: usize, p_within: f64, p_between: f64, samples: usize) -> Result<Self> {
        Ok(Self {
            p,
            r_spike,
            block_sizes: equal_blocks(p, r_spike)?,
            p_within,
            p_between,
            samples,
        })
    }
}

/// Population covariance `Sigma = M P M^T + I`.
pub fn spiked_covariance(params: &SpikedCovParams) -> Result<SymmetricMatrix> {
    let SpikedCovParams {
        p,
        r_spike,
        ref block_sizes,
        p_within,
        p_between,
        ..
    } = *params;
    if block_sizes.len() != r_spike || block_sizes.iter().sum::<usize>() != p || block_sizes.contains(&0) {
        return Err(Error::InvalidParameter(format!(
            "need {r_spike} positive block sizes summing to p = {p}"
        )));
    }
    if !(p_within.is_finite() && p_between.is_finite()) {
        return Err(Error::InvalidParameter("P entries must be finite".into()));
    }
    // eigenvalues of the two-value P: p_w - p_b (r - 1 times) and p_w + (r - 1) p_b
    let min_eig = if r_spike > 1 {
        (p_within - p_between).min(p_within + (r_spike - 1) as f64 * p_between)
    } else {
        p_within
    };
    if min_eig < 0.0 {
        return Err(Error::InvalidParameter(format!(
            "P with p_within = {p_within}, p_between = {p_between} is not positive semidefinite"
        )));
    }
    let labels = memberships(block_sizes);
    let sigma = Matrix::from_fn(p, p, |i, j| {
        let base = if labels[i] == labels[j] { p_within } else { p_between };
        base + if i == j { 1.0 } else { 0.0 }
    });
    SymmetricMatrix::symmetrized(&sigma)
}

/// `X X^T / N` for `X = chol(Sigma) Z` with `Z` drawn from `rng`.
pub fn sample_covariance<R: RngCore>(sigma: &SymmetricMatrix, samples: usize, rng: &mut R) -> Result<SymmetricMatrix> {
    let p = sigma.n();
    let mut normals = Normals::new(rng);
    let z = Matrix::from_fn(p, samples, |_, _| normals.sample());
    sample_covariance_from(sigma, &z)
}

/// [`sample_covariance`] with the standard normal matrix `Z` (`p x N`)
/// supplied by the caller.
pub fn sample_covariance_from(sigma: &SymmetricMatrix, z: &Matrix) -> Result<SymmetricMatrix> {
    let p = sigma.n();
    if z.rows() != p || z.cols() == 0 {
        return Err(Error::DimensionMismatch(format!(
            "Z is {}x{}, expected {p} rows and at least one sample",
            z.rows(),
            z.cols()
        )));
    }
    let l = cholesky(sigma)?;
    let x = l.matmul(z)?;
    let xt = x.transpose();
    let gram = xt.tr_matmul(&xt)?;
    SymmetricMatrix::symmetrized(&gram.scaled(1.0 / z.cols() as f64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectra::{eigh, spectral_norm_value};

    fn graph(edges: &[(usize, usize)], n: usize) -> Result<GraphOperators> {
        let mut a = Matrix::zeros(n, n);
        for &(i, j) in edges {
            a[(i, j)] = 1.0;
            a[(j, i)] = 1.0;
        }
        GraphOperators::from_adjacency(SymmetricMatrix::new(a).unwrap())
    }

    #[test]
    fn complete_graph_at_probability_one() {
        let params = SbmParams::equal(3, 1, 1.0, 1.0).unwrap();
        let ops = sample_sbm(&params, &mut stream(1, "t", 0, 0)).unwrap();
        assert_eq!(ops.degrees, vec![2, 2, 2]);
        let ev = eigh(&ops.l).unwrap().values;
        for (v, e) in ev.iter().zip([0.0, 3.0, 3.0]) {
            assert!((v - e).abs() < 1e-12);
        }
        assert_eq!(degree_extreme_difference(&ops), 0);
    }

    #[test]
    fn disjoint_edges_when_between_is_zero() {
        let params = SbmParams::new(vec![2, 2], 1.0, 0.0).unwrap();
        let ops = sample_sbm(&params, &mut stream(7, "t", 0, 0)).unwrap();
        assert_eq!(ops.degrees, vec![1; 4]);
        assert_eq!(ops.a.get(0, 1), 1.0);
        assert_eq!(ops.a.get(0, 2), 0.0);
        assert_eq!(ops.a.get(2, 3), 1.0);
    }

    #[test]
    fn within_block_density_matches_probability() {
        let params = SbmParams::equal(300, 3, 0.6, 0.1).unwrap();
        let ops = sample_sbm(&params, &mut stream(2024, "density", 0, 0)).unwrap();
        let labels = memberships(&params.block_sizes);
        let (mut edges, mut pairs) = (0.0f64, 0.0f64);
        for i in 0..300 {
            for j in i + 1..300 {
                if labels[i] == labels[j] {
                    pairs += 1.0;
                    edges += ops.a.get(i, j);
                }
            }
        }
        let se = (0.6 * 0.4 / pairs).sqrt();
        assert!((edges / pairs - 0.6).abs() <= 3.0 * se);
    }

    #[test]
    fn isolated_vertex_is_reported() {
        let err = graph(&[(0, 1)], 3).unwrap_err();
        assert!(matches!(err, Error::ZeroDegree { vertex: 2 }));
        let params = SbmParams::equal(4, 1, 0.0, 0.0).unwrap();
        assert!(matches!(
            sample_sbm(&params, &mut stream(0, "t", 0, 0)),
            Err(Error::ZeroDegree { vertex: 0 })
        ));
        assert!(sample_sbm_resampling(&params, 0, "t", 0, 3).is_err());
    }

    #[test]
    fn resampling_uses_later_attempts() {
        let params = SbmParams::equal(12, 3, 0.3, 0.02).unwrap();
        let (ops, attempts) = sample_sbm_resampling(&params, 3, "resample", 5, MAX_RESAMPLE_ATTEMPTS).unwrap();
        let again = sample_sbm(&params, &mut stream(3, "resample", 5, attempts - 1)).unwrap();
        assert_eq!(ops.a.as_matrix(), again.a.as_matrix());
    }

    #[test]
    fn degree_differences_of_small_graphs() {
        assert_eq!(degree_extreme_difference(&graph(&[(0, 1), (1, 2)], 3).unwrap()), 1);
        let star = graph(&[(0, 1), (0, 2), (0, 3), (0, 4)], 5).unwrap();
        assert_eq!(degree_extreme_difference(&star), 3);
    }

    #[test]
    fn laplacian_identities() {
        let ops = sample_sbm(&SbmParams::equal(30, 3, 0.6, 0.1).unwrap(), &mut stream(9, "lap", 0, 0)).unwrap();
        let n = 30;
        for i in 0..n {
            let row: f64 = ops.l.as_matrix().row(i).iter().sum();
            assert_eq!(row, 0.0);
        }
        let ev = eigh(&ops.l).unwrap();
        assert!(ev.values[0] > -1e-10 && ev.values[0].abs() < 1e-10);
        let sq: Vec<f64> = ops.degrees.iter().map(|&d| (d as f64).sqrt()).collect();
        let back = Matrix::from_fn(n, n, |i, j| sq[i] * ops.l_sym.get(i, j) * sq[j]);
        assert!(back.sub(ops.l.as_matrix()).unwrap().max_abs() <= 1e-12);
    }

    #[test]
    fn generating_matrices_of_complete_graph() {
        let g = generating_matrices(&SbmParams::equal(3, 1, 1.0, 1.0).unwrap()).unwrap();
        let j = Matrix::from_fn(3, 3, |_, _| 1.0);
        let i3 = Matrix::identity(3);
        assert_eq!(g.b_a.as_matrix(), &j.sub(&i3).unwrap());
        assert_eq!(g.b_l.as_matrix(), &i3.scaled(3.0).sub(&j).unwrap());
        let expected = i3.sub(&j.sub(&i3).unwrap().scaled(0.5)).unwrap();
        assert!(g.b_lsym.as_matrix().sub(&expected).unwrap().max_abs() < 1e-15);
        let ev = eigh(&g.b_lsym).unwrap().values;
        for (v, e) in ev.iter().zip([0.0, 1.5, 1.5]) {
            assert!((v - e).abs() < 1e-12);
        }
    }

    #[test]
    fn generating_adjacency_has_three_large_eigenvalues() {
        let g = generating_matrices(&SbmParams::equal(30, 3, 0.9, 0.1).unwrap()).unwrap();
        let ev = eigh(&g.b_a).unwrap().values;
        // M P M^T has rank 3; the diagonal correction shifts everything by -p_w
        let mut distinct: Vec<f64> = Vec::new();
        for v in ev {
            if !distinct.iter().any(|d| (d - v).abs() < 1e-9) {
                distinct.push(v);
            }
        }
        assert_eq!(distinct.len(), 3);
        assert!(distinct.iter().all(|v| v.abs() > 1e-9));
        assert_eq!(g.b_a.get(4, 4), 0.0);
        for i in 0..30 {
            let row: f64 = g.b_l.as_matrix().row(i).iter().sum();
            assert!(row.abs() < 1e-12);
        }
    }

    #[test]
    fn spiked_covariance_spectra() {
        let s = spiked_covariance(&SpikedCovParams::equal(4, 1, 0.5, 0.0, 10).unwrap()).unwrap();
        let ev = eigh(&s).unwrap().values;
        for (v, e) in ev.iter().zip([1.0, 1.0, 1.0, 3.0]) {
            assert!((v - e).abs() < 1e-12);
        }
        let s = spiked_covariance(&SpikedCovParams::equal(6, 2, 0.7, 0.0, 10).unwrap()).unwrap();
        let ev = eigh(&s).unwrap().values;
        assert!((ev[4] - 3.1).abs() < 1e-12 && (ev[5] - 3.1).abs() < 1e-12);

        let s = spiked_covariance(&SpikedCovParams::equal(60, 3, 0.8, 0.2, 10).unwrap()).unwrap();
        let ev = eigh(&s).unwrap().values;
        assert_eq!(ev.iter().filter(|&&v| v > 1.0 + 1e-9).count(), 3);
        assert_eq!(ev.iter().filter(|&&v| (v - 1.0).abs() <= 1e-9).count(), 57);

        assert!(spiked_covariance(&SpikedCovParams::equal(6, 3, 0.1, 0.5, 10).unwrap()).is_err());
    }

    #[test]
    fn zero_normals_give_zero_covariance() {
        let sigma = SymmetricMatrix::identity(3);
        let s = sample_covariance_from(&sigma, &Matrix::zeros(3, 5)).unwrap();
        assert_eq!(s.as_matrix().max_abs(), 0.0);
    }

    #[test]
    fn sample_covariance_concentrates() {
        let sigma = SymmetricMatrix::identity(2);
        let n = 100_000;
        let s = sample_covariance(&sigma, n, &mut stream(11, "cov", 0, 0)).unwrap();
        let err = spectral_norm_value(&s.sub(&sigma).unwrap());
        assert!(err <= 5.0 * (2.0 / n as f64).sqrt(), "{err}");
        assert!(eigh(&s).unwrap().values[0] >= 0.0);
    }

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let a: Vec<u64> = (0..4)
            .map({
                let mut r = stream(5, "x", 1, 0);
                move |_| r.next_u64()
            })
            .collect();
        let b: Vec<u64> = (0..4)
            .map({
                let mut r = stream(5, "x", 1, 0);
                move |_| r.next_u64()
            })
            .collect();
        let c = stream(5, "x", 2, 0).next_u64();
        let d = stream(5, "y", 1, 0).next_u64();
        assert_eq!(a, b);
        assert_ne!(a[0], c);
        assert_ne!(a[0], d);
    }

    #[test]
    fn normals_have_unit_moments() {
        let mut rng = stream(1, "normals", 0, 0);
        let mut g = Normals::new(&mut rng);
        let xs: Vec<f64> = (0..200_000).map(|_| g.sample()).collect();
        let mean = xs.iter().sum::<f64>() / xs.len() as f64;
        let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / xs.len() as f64;
        assert!(mean.abs() < 0.01 && (var - 1.0).abs() < 0.02);
    }
}
