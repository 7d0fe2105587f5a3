//! Eigenvalue separations, feasibility constraints and the bound objective.
//!
//! All quantities are evaluated on the *oriented* pair held by a
//! [`ComparisonSpec`]: a matrix flagged as reversed is replaced by its
//! negation, so that ascending block selection addresses its largest
//! eigenvalues. [`ComparisonSpec::to_original`] maps parameters back.

use std::fmt;

use crate::error::{Error, Result};
use crate::spectra::{eigh, spectral_norm_value, EigenSystem, SymmetricMatrix};
use crate::subspace::{block, scaling_constant, EigenvectorBlock};

/// A ψ-gap at or below this fraction of `||Psi||_2` counts as degenerate.
pub const EIGENGAP_TOLERANCE: f64 = 1e-11;

/// Strictness margin used to verify the open constraints.
pub fn epsilon_strict(delta: f64) -> f64 {
    1e-9 * (1.0 + delta.abs())
}

/// Affine map `c1 -> f(phi) = c1 * phi + c0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TransformParams {
    pub c1: f64,
    pub c0: f64,
}

impl TransformParams {
    pub const IDENTITY: TransformParams = TransformParams { c1: 1.0, c0: 0.0 };

    pub fn new(c1: f64, c0: f64) -> Self {
        Self { c1, c0 }
    }
}

/// The four separations: interval choice 1 or 2, crossed with the sign of c1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DeltaVariant {
    D1Plus,
    D1Minus,
    D2Plus,
    D2Minus,
}

impl DeltaVariant {
    pub const ALL: [DeltaVariant; 4] = [
        DeltaVariant::D1Plus,
        DeltaVariant::D1Minus,
        DeltaVariant::D2Plus,
        DeltaVariant::D2Minus,
    ];

    /// +1 for the variants requiring `c1 > 0`, -1 otherwise.
    pub fn sign(self) -> f64 {
        match self {
            DeltaVariant::D1Plus | DeltaVariant::D2Plus => 1.0,
            DeltaVariant::D1Minus | DeltaVariant::D2Minus => -1.0,
        }
    }

    pub fn interval(self) -> u8 {
        match self {
            DeltaVariant::D1Plus | DeltaVariant::D1Minus => 1,
            DeltaVariant::D2Plus | DeltaVariant::D2Minus => 2,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            DeltaVariant::D1Plus => "d1+",
            DeltaVariant::D1Minus => "d1-",
            DeltaVariant::D2Plus => "d2+",
            DeltaVariant::D2Minus => "d2-",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|v| v.name() == s)
    }

    fn requirement(self) -> &'static str {
        if self.sign() > 0.0 {
            "c1 > 0"
        } else {
            "c1 < 0"
        }
    }
}

impl fmt::Display for DeltaVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// `a * c1 + b * c0 + k`. In Charnes–Cooper coordinates the same form reads
/// `a * y1 + b * y2 + k * t`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Affine {
    pub a: f64,
    pub b: f64,
    pub k: f64,
}

impl Affine {
    pub fn eval(&self, p: TransformParams) -> f64 {
        self.a * p.c1 + self.b * p.c0 + self.k
    }

    pub fn eval_homogeneous(&self, y1: f64, y2: f64, t: f64) -> f64 {
        self.a * y1 + self.b * y2 + self.k * t
    }

    fn minus(self, o: Affine) -> Affine {
        Affine {
            a: self.a - o.a,
            b: self.b - o.b,
            k: self.k - o.k,
        }
    }
}

/// Linear structure of one variant's subproblem.
#[derive(Clone, Debug)]
pub struct VariantForms {
    pub variant: DeltaVariant,
    /// Finite terms whose minimum is delta; boundary terms are `+inf` and omitted.
    pub terms: Vec<Affine>,
    /// Constraint rows `g` that must satisfy `delta - g > 0`.
    pub constraints: [Affine; 2],
}

/// One bound problem: two symmetric matrices, their spectra, and the block.
#[derive(Clone, Debug)]
pub struct ComparisonSpec {
    pub phi: SymmetricMatrix,
    pub psi: SymmetricMatrix,
    pub phi_sys: EigenSystem,
    pub psi_sys: EigenSystem,
    pub j: usize,
    pub r: usize,
    pub reverse_phi: bool,
    pub reverse_psi: bool,
    pub phi_norm: f64,
    pub psi_norm: f64,
    pub warnings: Vec<String>,
    degenerate: bool,
}

impl ComparisonSpec {
    /// Builds a spec, decomposing both matrices. Reversed matrices are
    /// negated so that offset `j` counts from the top of their spectrum.
    pub fn new(
        phi: &SymmetricMatrix,
        psi: &SymmetricMatrix,
        j: usize,
        r: usize,
        reverse_phi: bool,
        reverse_psi: bool,
    ) -> Result<Self> {
        let phi_sys = eigh(phi)?;
        let psi_sys = eigh(psi)?;
        Self::from_parts(phi, psi, phi_sys, psi_sys, j, r, reverse_phi, reverse_psi)
    }

    /// Builds a spec from precomputed eigensystems of the unreversed matrices.
    #[allow(clippy::too_many_arguments)]
    pub fn from_parts(
        phi: &SymmetricMatrix,
        psi: &SymmetricMatrix,
        phi_sys: EigenSystem,
        psi_sys: EigenSystem,
        j: usize,
        r: usize,
        reverse_phi: bool,
        reverse_psi: bool,
    ) -> Result<Self> {
        let n = phi.n();
        if psi.n() != n || phi_sys.n() != n || psi_sys.n() != n {
            return Err(Error::DimensionMismatch(format!(
                "Phi is {n}x{n} but Psi is {0}x{0}",
                psi.n()
            )));
        }
        if r == 0 || r >= n || j + r > n {
            return Err(Error::IndexOutOfRange(format!(
                "need 1 <= r <= n-1 and 0 <= j <= n-r; got n={n}, j={j}, r={r}"
            )));
        }
        let (phi, phi_sys) = orient(phi, phi_sys, reverse_phi);
        let (psi, psi_sys) = orient(psi, psi_sys, reverse_psi);
        let phi_norm = phi_sys.values[0].abs().max(phi_sys.values[n - 1].abs());
        let psi_norm = psi_sys.values[0].abs().max(psi_sys.values[n - 1].abs());

        let mut spec = ComparisonSpec {
            phi,
            psi,
            phi_sys,
            psi_sys,
            j,
            r,
            reverse_phi,
            reverse_psi,
            phi_norm,
            psi_norm,
            warnings: Vec::new(),
            degenerate: false,
        };
        let tol = EIGENGAP_TOLERANCE * psi_norm;
        for (lo, hi) in [(j, j + 1), (j + r, j + r + 1)] {
            if lo >= 1 && hi <= n {
                let gap = spec.psi(hi) - spec.psi(lo);
                if gap <= tol {
                    spec.degenerate = true;
                    spec.warnings.push(format!(
                        "degenerate eigengap: psi_{hi} - psi_{lo} = {gap:e}; bound falls back to trivial"
                    ));
                }
            }
        }
        Ok(spec)
    }

    pub fn n(&self) -> usize {
        self.phi.n()
    }

    /// True when a ψ eigengap adjacent to the block vanishes.
    pub fn is_degenerate(&self) -> bool {
        self.degenerate
    }

    /// Oriented φ eigenvalue, 1-based, with the `+-inf` boundary convention.
    pub fn phi(&self, index: usize) -> f64 {
        extended_value(&self.phi_sys.values, index)
    }

    pub fn psi(&self, index: usize) -> f64 {
        extended_value(&self.psi_sys.values, index)
    }

    pub fn scaling_constant(&self) -> f64 {
        scaling_constant(self.n(), self.r)
    }

    /// Eigenvector blocks `(W, V)` of the original matrices being compared.
    pub fn blocks(&self) -> Result<(EigenvectorBlock, EigenvectorBlock)> {
        Ok((
            block(&self.phi_sys, self.j, self.r, false)?,
            block(&self.psi_sys, self.j, self.r, false)?,
        ))
    }

    /// Maps oriented parameters to the original (unreversed) matrices.
    pub fn to_original(&self, p: TransformParams) -> TransformParams {
        let sp = if self.reverse_phi { -1.0 } else { 1.0 };
        let ss = if self.reverse_psi { -1.0 } else { 1.0 };
        TransformParams {
            c1: p.c1 * sp * ss,
            c0: p.c0 * ss,
        }
    }

    pub fn from_original(&self, p: TransformParams) -> TransformParams {
        // the map is an involution
        self.to_original(p)
    }

    /// `c1 Phi + c0 I - Psi` on the oriented pair.
    pub fn residual_matrix(&self, p: TransformParams) -> SymmetricMatrix {
        self.phi.affine_residual(p.c1, p.c0, &self.psi)
    }

    /// Linear forms of delta and of the constraint rows for `variant`.
    pub fn forms(&self, variant: DeltaVariant) -> VariantForms {
        let (j, r, n) = (self.j, self.r, self.n());
        let boundary = |i: usize| i == 0 || i == n + 1;
        // psi_p - (c1 phi_q + c0)
        let above = |p: usize, q: usize| -> Option<Affine> {
            (!boundary(p) && !boundary(q)).then(|| Affine {
                a: -self.phi(q),
                b: -1.0,
                k: self.psi(p),
            })
        };
        // (c1 phi_q + c0) - psi_p
        let below = |q: usize, p: usize| -> Option<Affine> {
            (!boundary(p) && !boundary(q)).then(|| Affine {
                a: self.phi(q),
                b: 1.0,
                k: -self.psi(p),
            })
        };
        let terms = match variant {
            DeltaVariant::D1Plus => [above(j + r + 1, j + r), below(j + 1, j)],
            DeltaVariant::D1Minus => [above(j + r + 1, j + 1), below(j + r, j)],
            DeltaVariant::D2Plus => [below(j + r + 1, j + r), above(j + 1, j)],
            DeltaVariant::D2Minus => [below(j, j + r), above(j + 1, j + r + 1)],
        };
        let terms = terms.into_iter().flatten().collect();

        // block endpoints attaining min f and max f for this sign of c1
        let (lo, hi) = if variant.sign() > 0.0 {
            (j + 1, j + r)
        } else {
            (j + r, j + 1)
        };
        let f = |q: usize| Affine {
            a: self.phi(q),
            b: 1.0,
            k: 0.0,
        };
        let psi_const = |p: usize| Affine {
            a: 0.0,
            b: 0.0,
            k: self.psi(p),
        };
        let constraints = match variant.interval() {
            // min f - psi_{j+1} < delta, psi_{j+r} - max f < delta
            1 => [f(lo).minus(psi_const(j + 1)), psi_const(j + r).minus(f(hi))],
            // psi_{j+1} - min f < delta, max f - psi_{j+r} < delta
            _ => [psi_const(j + 1).minus(f(lo)), f(hi).minus(psi_const(j + r))],
        };
        VariantForms {
            variant,
            terms,
            constraints,
        }
    }
}

fn orient(m: &SymmetricMatrix, sys: EigenSystem, reverse: bool) -> (SymmetricMatrix, EigenSystem) {
    if reverse {
        (m.neg(), sys.reversed())
    } else {
        (m.clone(), sys)
    }
}

fn extended_value(values: &[f64], index: usize) -> f64 {
    if index == 0 {
        f64::NEG_INFINITY
    } else if index > values.len() {
        f64::INFINITY
    } else {
        values[index - 1]
    }
}

/// Eigenvalue `index` (1-based) of `sys`, with index 0 at `-inf` and index
/// `n + 1` at `+inf`.
pub fn extended_eigenvalue(sys: &EigenSystem, index: usize) -> Result<f64> {
    let n = sys.n();
    if index > n + 1 {
        return Err(Error::IndexOutOfRange(format!(
            "eigenvalue index {index} outside [0, {}]",
            n + 1
        )));
    }
    Ok(extended_value(&sys.values, index))
}

fn check_sign(variant: DeltaVariant, p: TransformParams) -> Result<()> {
    if p.c1 * variant.sign() > 0.0 {
        Ok(())
    } else {
        Err(Error::SignConstraint {
            variant: variant.name(),
            requirement: variant.requirement(),
            c1: p.c1,
        })
    }
}

/// The variant's separation, evaluated literally as the minimum of two
/// terms in extended arithmetic.
pub fn delta(spec: &ComparisonSpec, p: TransformParams, variant: DeltaVariant) -> Result<f64> {
    check_sign(variant, p)?;
    Ok(delta_unchecked(spec, p, variant))
}

fn delta_unchecked(spec: &ComparisonSpec, p: TransformParams, variant: DeltaVariant) -> f64 {
    let (j, r) = (spec.j, spec.r);
    let (c1, c0) = (p.c1, p.c0);
    let f = |q: usize| {
        let phi = spec.phi(q);
        if phi.is_infinite() {
            // c1 * (+-inf) with the sign of c1 fixed by the variant
            phi * c1.signum()
        } else {
            c1 * phi + c0
        }
    };
    let psi = |p: usize| spec.psi(p);
    let (x, y) = match variant {
        DeltaVariant::D1Plus => (psi(j + r + 1) - f(j + r), f(j + 1) - psi(j)),
        DeltaVariant::D1Minus => (psi(j + r + 1) - f(j + 1), f(j + r) - psi(j)),
        DeltaVariant::D2Plus => (f(j + r + 1) - psi(j + r), psi(j + 1) - f(j)),
        DeltaVariant::D2Minus => (f(j) - psi(j + r), psi(j + 1) - f(j + r + 1)),
    };
    x.min(y)
}

/// Named residuals of the subproblem constraints; all must be strictly
/// positive (beyond [`epsilon_strict`]) for feasibility.
#[derive(Clone, Debug)]
pub struct FeasibilityReport {
    pub delta: f64,
    pub constraint_residuals: Vec<(&'static str, f64)>,
    pub feasible: bool,
    pub strictness_margin: f64,
}

pub fn feasibility(spec: &ComparisonSpec, p: TransformParams, variant: DeltaVariant) -> FeasibilityReport {
    let forms = spec.forms(variant);
    let delta = delta_unchecked(spec, p, variant);
    let mut residuals: Vec<(&'static str, f64)> = vec![
        ("sign", variant.sign() * p.c1),
        ("delta", delta),
        ("lower_overlap", delta - forms.constraints[0].eval(p)),
        ("upper_overlap", delta - forms.constraints[1].eval(p)),
    ];
    if spec.is_degenerate() {
        let n = spec.n();
        let (j, r) = (spec.j, spec.r);
        let mut gap = f64::INFINITY;
        for (lo, hi) in [(j, j + 1), (j + r, j + r + 1)] {
            if lo >= 1 && hi <= n {
                gap = gap.min(spec.psi(hi) - spec.psi(lo));
            }
        }
        residuals.push(("psi_eigengap", gap - EIGENGAP_TOLERANCE * spec.psi_norm));
    }
    let eps = epsilon_strict(delta);
    let strictness_margin = residuals.iter().map(|&(_, v)| v).fold(f64::INFINITY, f64::min);
    let feasible = delta.is_finite() && residuals.iter().all(|&(_, v)| !v.is_nan()) && strictness_margin > eps;
    FeasibilityReport {
        delta,
        constraint_residuals: residuals,
        feasible,
        strictness_margin,
    }
}

/// `||c1 Phi + c0 I - Psi||_2 / delta` when feasible, `+inf` otherwise.
/// This is the unscaled ratio, which equals the bound rescaled by `c_{n,r}`.
pub fn objective(spec: &ComparisonSpec, p: TransformParams, variant: DeltaVariant) -> f64 {
    let rep = feasibility(spec, p, variant);
    if !rep.feasible {
        return f64::INFINITY;
    }
    spectral_norm_value(&spec.residual_matrix(p)) / rep.delta
}

/// The classical bound, `p(Phi) = Phi` on the original matrices.
#[derive(Clone, Debug)]
pub struct StandardDk {
    pub value: f64,
    pub feasible: bool,
    pub variant_used: Option<DeltaVariant>,
}

/// Evaluates the identity transform of the original matrices under both
/// interval choices and keeps the smaller feasible value. On a reversed
/// spec the identity maps to `c1 = -1` and is scored by the minus variants.
pub fn standard_dk(spec: &ComparisonSpec) -> StandardDk {
    let p = spec.from_original(TransformParams::IDENTITY);
    let variants: [DeltaVariant; 2] = if p.c1 > 0.0 {
        [DeltaVariant::D1Plus, DeltaVariant::D2Plus]
    } else {
        [DeltaVariant::D1Minus, DeltaVariant::D2Minus]
    };
    let mut best = StandardDk {
        value: f64::INFINITY,
        feasible: false,
        variant_used: None,
    };
    for v in variants {
        let value = objective(spec, p, v);
        if value < best.value {
            best = StandardDk {
                value,
                feasible: true,
                variant_used: Some(v),
            };
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diag(d: &[f64]) -> SymmetricMatrix {
        SymmetricMatrix::from_diagonal(d).unwrap()
    }

    fn spec(phi: &[f64], psi: &[f64], j: usize, r: usize) -> ComparisonSpec {
        ComparisonSpec::new(&diag(phi), &diag(psi), j, r, false, false).unwrap()
    }

    #[test]
    fn extended_eigenvalue_conventions() {
        let es = eigh(&diag(&[1.0, 2.0, 3.0])).unwrap();
        assert_eq!(extended_eigenvalue(&es, 0).unwrap(), f64::NEG_INFINITY);
        assert_eq!(extended_eigenvalue(&es, 4).unwrap(), f64::INFINITY);
        assert_eq!(extended_eigenvalue(&es, 2).unwrap(), 2.0);
        assert!(extended_eigenvalue(&es, 5).is_err());
    }

    #[test]
    fn delta_examples() {
        let s = spec(&[1.0, 2.0, 3.0], &[1.0, 2.0, 3.0], 1, 1);
        assert_eq!(delta(&s, TransformParams::IDENTITY, DeltaVariant::D1Plus).unwrap(), 1.0);

        let s = spec(&[0.0, 1.0, 2.0], &[0.0, 2.0, 4.0], 0, 1);
        assert_eq!(
            delta(&s, TransformParams::new(2.0, 0.0), DeltaVariant::D1Plus).unwrap(),
            2.0
        );

        let s = spec(&[1.0, 2.0, 3.0], &[-3.0, -2.0, -1.0], 0, 1);
        let p = TransformParams::new(-1.0, 0.0);
        assert_eq!(delta(&s, p, DeltaVariant::D2Minus).unwrap(), -1.0);
        let rep = feasibility(&s, p, DeltaVariant::D2Minus);
        assert!(!rep.feasible);
        assert_eq!(rep.delta, -1.0);
    }

    #[test]
    fn sign_constraint_is_an_error() {
        let s = spec(&[1.0, 2.0, 3.0], &[1.0, 2.0, 3.0], 1, 1);
        assert!(matches!(
            delta(&s, TransformParams::new(-1.0, 0.0), DeltaVariant::D1Plus),
            Err(Error::SignConstraint { .. })
        ));
        assert!(delta(&s, TransformParams::new(0.0, 0.0), DeltaVariant::D1Minus).is_err());
    }

    #[test]
    fn identity_margins_equal_eigengaps() {
        let s = spec(&[1.0, 2.0, 4.0], &[1.0, 2.0, 4.0], 1, 1);
        let rep = feasibility(&s, TransformParams::IDENTITY, DeltaVariant::D1Plus);
        assert!(rep.feasible);
        // delta = min(4 - 2, 2 - 1)
        assert_eq!(rep.delta, 1.0);
        let get = |name: &str| rep.constraint_residuals.iter().find(|r| r.0 == name).unwrap().1;
        assert_eq!(get("lower_overlap"), 1.0);
        assert_eq!(get("upper_overlap"), 1.0);
    }

    #[test]
    fn huge_offset_is_infeasible_for_interior_blocks() {
        let s = spec(&[1.0, 2.0, 3.0, 4.0], &[1.5, 2.0, 3.5, 4.0], 1, 1);
        for v in DeltaVariant::ALL {
            let p = TransformParams::new(v.sign(), 1e9);
            let rep = feasibility(&s, p, v);
            assert!(!rep.feasible);
            assert!(rep.delta < -1e8);
        }
    }

    #[test]
    fn objective_examples() {
        let s = spec(&[1.0, 2.0, 3.0], &[1.0, 2.0, 3.0], 1, 1);
        assert_eq!(objective(&s, TransformParams::IDENTITY, DeltaVariant::D1Plus), 0.0);

        let s = spec(&[0.0, 1.0, 2.0], &[0.0, 2.0, 4.0], 0, 1);
        assert_eq!(objective(&s, TransformParams::new(2.0, 0.0), DeltaVariant::D1Plus), 0.0);
        // ||Phi - Psi|| = 2, delta = min(psi_2 - phi_1, +inf) = 2
        assert_eq!(objective(&s, TransformParams::IDENTITY, DeltaVariant::D1Plus), 1.0);
    }

    #[test]
    fn standard_dk_examples() {
        let s = spec(&[1.0, 2.0, 3.0], &[1.0, 2.0, 3.0], 1, 1);
        let sd = standard_dk(&s);
        assert!(sd.feasible);
        assert_eq!(sd.value, 0.0);

        let s = spec(&[0.0, 1.0, 2.0], &[0.0, 2.0, 4.0], 0, 1);
        assert_eq!(standard_dk(&s).value, 1.0);

        // path graph on 3 vertices: adjacency eigenvalues (-sqrt2, 0, sqrt2),
        // Laplacian eigenvalues (0, 1, 3); interval 1 separates, interval 2 does not
        let a = SymmetricMatrix::from_rows(&[vec![0.0, 1.0, 0.0], vec![1.0, 0.0, 1.0], vec![0.0, 1.0, 0.0]]).unwrap();
        let l =
            SymmetricMatrix::from_rows(&[vec![1.0, -1.0, 0.0], vec![-1.0, 2.0, -1.0], vec![0.0, -1.0, 1.0]]).unwrap();
        let s = ComparisonSpec::new(&a, &l, 0, 1, false, false).unwrap();
        let d1 = feasibility(&s, TransformParams::IDENTITY, DeltaVariant::D1Plus);
        assert!(d1.feasible);
        assert!((d1.delta - (1.0 + 2f64.sqrt())).abs() < 1e-12);
        let d2 = feasibility(&s, TransformParams::IDENTITY, DeltaVariant::D2Plus);
        assert!(!d2.feasible);
        assert!(d2.delta.abs() < 1e-12);
        assert_eq!(standard_dk(&s).variant_used, Some(DeltaVariant::D1Plus));

        // interval 1 fails its overlap row, interval 2 has negative delta
        let s = spec(&[0.0, 1.0, 2.0], &[0.0, 5.0, 6.0], 1, 1);
        let sd = standard_dk(&s);
        assert!(!sd.feasible);
        assert_eq!(sd.value, f64::INFINITY);
        assert_eq!(sd.variant_used, None);
    }

    #[test]
    fn forms_match_literal_delta() {
        let s = spec(&[0.3, 1.1, 2.0, 2.9, 4.2], &[0.1, 1.0, 2.5, 3.0, 5.0], 1, 2);
        for v in DeltaVariant::ALL {
            let p = TransformParams::new(v.sign() * 1.3, -0.4);
            let f = s.forms(v);
            let via_forms = f.terms.iter().map(|t| t.eval(p)).fold(f64::INFINITY, f64::min);
            assert!((via_forms - delta(&s, p, v).unwrap()).abs() < 1e-14);
        }
    }

    #[test]
    fn degenerate_gap_makes_every_variant_infeasible() {
        let s = spec(&[1.0, 2.0, 3.0], &[1.0, 2.0, 2.0], 0, 2);
        assert!(s.is_degenerate());
        assert!(!s.warnings.is_empty());
        for v in DeltaVariant::ALL {
            assert!(!feasibility(&s, TransformParams::new(v.sign(), 0.0), v).feasible);
        }
    }

    #[test]
    fn reversal_maps_parameters() {
        let phi = diag(&[1.0, 2.0, 3.0]);
        let psi = diag(&[0.5, 1.5, 3.5]);
        let s = ComparisonSpec::new(&phi, &psi, 0, 1, true, false).unwrap();
        assert_eq!(s.phi(1), -3.0);
        let p = TransformParams::new(-2.0, 0.7);
        let o = s.to_original(p);
        assert_eq!(o, TransformParams::new(2.0, 0.7));
        let direct = phi.affine_residual(o.c1, o.c0, &psi);
        let oriented = s.residual_matrix(p);
        assert_eq!(direct.as_matrix(), oriented.as_matrix());
    }
}
