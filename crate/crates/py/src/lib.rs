//! Python module `dkext`: comparison specs, bound assembly, the individual
//! subproblem solvers, the eigensolver and the random models.
//!
//! Matrices cross the boundary as lists of rows.

use dk::dkcore::{self, ComparisonSpec, DeltaVariant, TransformParams};
use dk::fracprog::{self, AssembleOptions, BoundReport, OracleGrid, SubproblemSolution};
use dk::models::{self, SbmParams, SpikedCovParams, MAX_RESAMPLE_ATTEMPTS};
use dk::subspace::{self, EigenvectorBlock};
use dk::{Matrix, SymmetricMatrix};
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

type Rows = Vec<Vec<f64>>;
type Residuals = Vec<(String, f64)>;

fn err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn matrix(rows: &Rows) -> PyResult<Matrix> {
    Matrix::from_rows(rows).map_err(err)
}

fn symmetric(rows: &Rows) -> PyResult<SymmetricMatrix> {
    SymmetricMatrix::new(matrix(rows)?).map_err(err)
}

fn rows(m: &Matrix) -> Rows {
    (0..m.rows()).map(|i| m.row(i).to_vec()).collect()
}

fn variant(name: &str) -> PyResult<DeltaVariant> {
    DeltaVariant::parse(name).ok_or_else(|| err(format!("unknown variant {name:?}; expected d1+, d1-, d2+ or d2-")))
}

/// One bound problem: `Phi`, `Psi`, block offset `j` and width `r`.
#[pyclass(name = "ComparisonSpec", frozen)]
struct PySpec(ComparisonSpec);

#[pymethods]
impl PySpec {
    #[new]
    #[pyo3(signature = (phi, psi, j, r, reverse_phi=false, reverse_psi=false))]
    fn new(phi: Rows, psi: Rows, j: usize, r: usize, reverse_phi: bool, reverse_psi: bool) -> PyResult<Self> {
        let spec =
            ComparisonSpec::new(&symmetric(&phi)?, &symmetric(&psi)?, j, r, reverse_phi, reverse_psi).map_err(err)?;
        Ok(Self(spec))
    }

    #[getter]
    fn n(&self) -> usize {
        self.0.n()
    }

    #[getter]
    fn j(&self) -> usize {
        self.0.j
    }

    #[getter]
    fn r(&self) -> usize {
        self.0.r
    }

    #[getter]
    fn degenerate(&self) -> bool {
        self.0.is_degenerate()
    }

    #[getter]
    fn scaling_constant(&self) -> f64 {
        self.0.scaling_constant()
    }

    #[getter]
    fn warnings(&self) -> Vec<String> {
        self.0.warnings.clone()
    }

    /// The variant's separation at `(c1, c0)`; errors on a sign mismatch.
    fn delta(&self, c1: f64, c0: f64, variant: &str) -> PyResult<f64> {
        dkcore::delta(&self.0, TransformParams::new(c1, c0), self::variant(variant)?).map_err(err)
    }

    /// `||c1 Phi + c0 I - Psi||_2 / delta`, or `inf` when infeasible.
    fn objective(&self, c1: f64, c0: f64, variant: &str) -> PyResult<f64> {
        Ok(dkcore::objective(
            &self.0,
            TransformParams::new(c1, c0),
            self::variant(variant)?,
        ))
    }

    /// `(feasible, strictness_margin, {residual name: value})`.
    fn feasibility(&self, c1: f64, c0: f64, variant: &str) -> PyResult<(bool, f64, Residuals)> {
        let f = dkcore::feasibility(&self.0, TransformParams::new(c1, c0), self::variant(variant)?);
        let res = f
            .constraint_residuals
            .iter()
            .map(|&(k, v)| (k.to_string(), v))
            .collect();
        Ok((f.feasible, f.strictness_margin, res))
    }

    /// The classical bound at the identity transform, `None` when infeasible.
    fn standard_dk(&self) -> Option<f64> {
        let s = dkcore::standard_dk(&self.0);
        s.feasible.then_some(s.value)
    }

    fn __repr__(&self) -> String {
        format!("ComparisonSpec(n={}, j={}, r={})", self.0.n(), self.0.j, self.0.r)
    }
}

/// Optimum of one subproblem.
#[pyclass(name = "SubproblemSolution", frozen, get_all)]
struct PySolution {
    variant: String,
    solver: String,
    feasible: bool,
    c1: f64,
    c0: f64,
    objective: f64,
    supremum: bool,
    exact_match: bool,
    iterations: usize,
    strictness_margin: f64,
    notes: Vec<String>,
}

impl From<&SubproblemSolution> for PySolution {
    fn from(s: &SubproblemSolution) -> Self {
        Self {
            variant: s.variant.name().to_string(),
            solver: s.solver.to_string(),
            feasible: s.feasible,
            c1: s.params.c1,
            c0: s.params.c0,
            objective: s.objective_unscaled,
            supremum: s.supremum,
            exact_match: s.exact_match,
            iterations: s.iterations,
            strictness_margin: s.strictness_margin,
            notes: s.notes.clone(),
        }
    }
}

#[pymethods]
impl PySolution {
    fn __repr__(&self) -> String {
        format!(
            "SubproblemSolution(variant={:?}, solver={:?}, feasible={}, objective={}, c1={}, c0={})",
            self.variant, self.solver, self.feasible, self.objective, self.c1, self.c0
        )
    }
}

/// Assembled bound for one comparison; all distances rescaled to `[0, 1]`.
#[pyclass(name = "BoundReport", frozen)]
struct PyReport(BoundReport);

#[pymethods]
impl PyReport {
    #[getter]
    fn extended_bound_rescaled(&self) -> f64 {
        self.0.extended_bound_rescaled
    }

    #[getter]
    fn extended_bound_raw(&self) -> f64 {
        self.0.extended_bound_raw
    }

    /// `inf` when the identity transform is infeasible.
    #[getter]
    fn standard_dk_rescaled(&self) -> f64 {
        self.0.standard_dk_rescaled
    }

    #[getter]
    fn rho1_rescaled(&self) -> f64 {
        self.0.rho1_rescaled
    }

    #[getter]
    fn rho1(&self) -> f64 {
        self.0.rho1
    }

    #[getter]
    fn rho2(&self) -> f64 {
        self.0.rho2
    }

    #[getter]
    fn scaling_constant(&self) -> f64 {
        self.0.scaling_constant
    }

    /// Optimal `(c1, c0)` for the original, unreversed matrices.
    #[getter]
    fn params(&self) -> Option<(f64, f64)> {
        self.0.params_original.map(|p| (p.c1, p.c0))
    }

    #[getter]
    fn best(&self) -> Option<PySolution> {
        self.0.best.as_ref().map(PySolution::from)
    }

    #[getter]
    fn variants(&self) -> Vec<PySolution> {
        self.0.variants.iter().map(PySolution::from).collect()
    }

    #[getter]
    fn dinkelbach(&self) -> Vec<PySolution> {
        self.0.dinkelbach.iter().map(PySolution::from).collect()
    }

    #[getter]
    fn oracle(&self) -> Vec<PySolution> {
        self.0.oracle.iter().map(PySolution::from).collect()
    }

    /// `(variant, solver, primary, secondary, relative difference)` per check.
    #[getter]
    fn cross_checks(&self) -> Vec<(String, String, f64, f64, f64)> {
        self.0
            .cross_checks
            .iter()
            .map(|c| {
                (
                    c.variant.name().into(),
                    c.solver.to_string(),
                    c.primary,
                    c.secondary,
                    c.relative_difference,
                )
            })
            .collect()
    }

    #[getter]
    fn degenerate(&self) -> bool {
        self.0.degenerate
    }

    #[getter]
    fn warnings(&self) -> Vec<String> {
        self.0.warnings.clone()
    }

    fn __repr__(&self) -> String {
        format!(
            "BoundReport(extended={}, standard={}, rho2={}, rho1_rescaled={})",
            self.0.extended_bound_rescaled, self.0.standard_dk_rescaled, self.0.rho2, self.0.rho1_rescaled
        )
    }
}

#[pyfunction]
#[pyo3(signature = (spec, dinkelbach=false, oracle=false))]
fn assemble_bound(spec: &PySpec, dinkelbach: bool, oracle: bool) -> PyResult<PyReport> {
    let opts = AssembleOptions {
        dinkelbach,
        oracle: oracle.then(OracleGrid::default),
        ..AssembleOptions::default()
    };
    fracprog::assemble_bound(&spec.0, &opts).map(PyReport).map_err(err)
}

/// Bound for a pair of matrices in one call.
#[pyfunction]
#[pyo3(signature = (phi, psi, j, r, reverse_phi=false, reverse_psi=false))]
fn bound(phi: Rows, psi: Rows, j: usize, r: usize, reverse_phi: bool, reverse_psi: bool) -> PyResult<PyReport> {
    let spec = PySpec::new(phi, psi, j, r, reverse_phi, reverse_psi)?;
    assemble_bound(&spec, false, false)
}

#[pyfunction]
fn solve_charnes_cooper(spec: &PySpec, variant: &str) -> PyResult<PySolution> {
    Ok(PySolution::from(&fracprog::solve_charnes_cooper(
        &spec.0,
        self::variant(variant)?,
    )))
}

/// Dinkelbach's iteration from `(c1, c0)`, by default `(sign, 0)`.
#[pyfunction]
#[pyo3(signature = (spec, variant, c1=None, c0=0.0))]
fn solve_dinkelbach(spec: &PySpec, variant: &str, c1: Option<f64>, c0: f64) -> PyResult<PySolution> {
    let v = self::variant(variant)?;
    let init = TransformParams::new(c1.unwrap_or(v.sign()), c0);
    Ok(PySolution::from(&fracprog::solve_dinkelbach(&spec.0, v, init)))
}

#[pyfunction]
fn solve_oracle(spec: &PySpec, variant: &str) -> PyResult<PySolution> {
    let grid = OracleGrid::default();
    Ok(PySolution::from(&fracprog::solve_oracle(
        &spec.0,
        self::variant(variant)?,
        &grid,
    )))
}

/// Ascending eigenvalues and eigenvectors (as columns).
#[pyfunction]
fn eigh(m: Rows) -> PyResult<(Vec<f64>, Rows)> {
    let es = dk::eigh(&symmetric(&m)?).map_err(err)?;
    Ok((es.values.clone(), rows(&es.vectors)))
}

fn basis(m: &Rows) -> PyResult<EigenvectorBlock> {
    let basis = matrix(m)?;
    Ok(EigenvectorBlock {
        j: 0,
        r: basis.cols(),
        basis,
    })
}

/// `min_Q ||W - V Q||_F` over orthogonal `Q`, for orthonormal bases `W`, `V`.
#[pyfunction]
fn rho1(w: Rows, v: Rows) -> PyResult<f64> {
    subspace::rho1(&basis(&w)?, &basis(&v)?).map_err(err)
}

/// `||W W^T (I - V V^T)||_2`.
#[pyfunction]
fn rho2(w: Rows, v: Rows) -> PyResult<f64> {
    subspace::rho2(&basis(&w)?, &basis(&v)?).map_err(err)
}

#[pyfunction]
fn scaling_constant(n: usize, r: usize) -> f64 {
    subspace::scaling_constant(n, r)
}

/// Samples a stochastic blockmodel graph with equal blocks, resampling
/// until no vertex is isolated. Returns `A`, `L`, `L_sym`, the degrees and
/// the number of attempts.
#[pyfunction]
#[pyo3(signature = (n, blocks, p_within, p_between, seed, label="python", replicate=0))]
#[allow(clippy::type_complexity)]
fn sample_sbm(
    n: usize,
    blocks: usize,
    p_within: f64,
    p_between: f64,
    seed: u64,
    label: &str,
    replicate: u64,
) -> PyResult<(Rows, Rows, Rows, Vec<usize>, u64)> {
    let params = SbmParams::equal(n, blocks, p_within, p_between).map_err(err)?;
    let (ops, attempts) =
        models::sample_sbm_resampling(&params, seed, label, replicate, MAX_RESAMPLE_ATTEMPTS).map_err(err)?;
    Ok((
        rows(ops.a.as_matrix()),
        rows(ops.l.as_matrix()),
        rows(ops.l_sym.as_matrix()),
        ops.degrees,
        attempts,
    ))
}

/// `(B_A, B_L, B_Lsym)` for equal blocks.
#[pyfunction]
fn generating_matrices(n: usize, blocks: usize, p_within: f64, p_between: f64) -> PyResult<(Rows, Rows, Rows)> {
    let params = SbmParams::equal(n, blocks, p_within, p_between).map_err(err)?;
    let g = models::generating_matrices(&params).map_err(err)?;
    Ok((
        rows(g.b_a.as_matrix()),
        rows(g.b_l.as_matrix()),
        rows(g.b_lsym.as_matrix()),
    ))
}

#[pyfunction]
fn spiked_covariance(p: usize, r_spike: usize, p_within: f64, p_between: f64) -> PyResult<Rows> {
    let params = SpikedCovParams::equal(p, r_spike, p_within, p_between, 1).map_err(err)?;
    Ok(rows(models::spiked_covariance(&params).map_err(err)?.as_matrix()))
}

#[pyfunction]
#[pyo3(signature = (sigma, samples, seed, label="python", replicate=0))]
fn sample_covariance(sigma: Rows, samples: usize, seed: u64, label: &str, replicate: u64) -> PyResult<Rows> {
    let mut rng = models::stream(seed, label, replicate, 0);
    let hat = models::sample_covariance(&symmetric(&sigma)?, samples, &mut rng).map_err(err)?;
    Ok(rows(hat.as_matrix()))
}

#[pymodule(name = "dkext")]
fn dkext_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PySpec>()?;
    m.add_class::<PySolution>()?;
    m.add_class::<PyReport>()?;
    m.add(
        "VARIANTS",
        DeltaVariant::ALL.iter().map(|v| v.name()).collect::<Vec<_>>(),
    )?;
    for f in [
        wrap_pyfunction!(assemble_bound, m)?,
        wrap_pyfunction!(bound, m)?,
        wrap_pyfunction!(solve_charnes_cooper, m)?,
        wrap_pyfunction!(solve_dinkelbach, m)?,
        wrap_pyfunction!(solve_oracle, m)?,
        wrap_pyfunction!(eigh, m)?,
        wrap_pyfunction!(rho1, m)?,
        wrap_pyfunction!(rho2, m)?,
        wrap_pyfunction!(scaling_constant, m)?,
        wrap_pyfunction!(sample_sbm, m)?,
        wrap_pyfunction!(generating_matrices, m)?,
        wrap_pyfunction!(spiked_covariance, m)?,
        wrap_pyfunction!(sample_covariance, m)?,
    ] {
        m.add_function(f)?;
    }
    Ok(())
}
