mod common;

use common::{random_orthogonal, rng, separated_values, with_spectrum};
use dkext::dkcore::{delta, feasibility, objective, ComparisonSpec, DeltaVariant, TransformParams};
use dkext::spectra::spectral_norm_value;
use proptest::prelude::*;

/// A pair with well-separated spectra, so no eigengap is degenerate.
fn spec(seed: u64, n: usize, r: usize, j: usize) -> ComparisonSpec {
    let mut g = rng(seed);
    let phi = with_spectrum(&random_orthogonal(n, &mut g), &separated_values(n, 0.05, &mut g));
    let psi = with_spectrum(&random_orthogonal(n, &mut g), &separated_values(n, 0.05, &mut g));
    ComparisonSpec::new(&phi, &psi, j, r, seed.is_multiple_of(3), seed.is_multiple_of(5)).unwrap()
}

fn block() -> impl Strategy<Value = (usize, usize, usize)> {
    (3usize..16)
        .prop_flat_map(|n| (Just(n), 1..n))
        .prop_flat_map(|(n, r)| (Just(n), Just(r), 0..=n - r))
}

fn variant() -> impl Strategy<Value = DeltaVariant> {
    prop::sample::select(DeltaVariant::ALL.to_vec())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn delta_is_concave_along_segments(
        seed in any::<u64>(), (n, r, j) in block(), v in variant(),
        a in (0.01f64..5.0, -10.0f64..10.0), b in (0.01f64..5.0, -10.0f64..10.0), t in 0.0f64..1.0,
    ) {
        let s = spec(seed, n, r, j);
        let p = TransformParams::new(v.sign() * a.0, a.1);
        let q = TransformParams::new(v.sign() * b.0, b.1);
        let m = TransformParams::new(p.c1 + t * (q.c1 - p.c1), p.c0 + t * (q.c0 - p.c0));
        let (dp, dq, dm) = (delta(&s, p, v).unwrap(), delta(&s, q, v).unwrap(), delta(&s, m, v).unwrap());
        let chord = if dp.is_infinite() || dq.is_infinite() { dp.min(dq) } else { dp + t * (dq - dp) };
        prop_assert!(dm >= chord - 1e-9 * (1.0 + chord.abs()));
    }

    #[test]
    fn top_block_delta_reduces(seed in any::<u64>(), (n, r, _j) in block(), c1 in 0.01f64..5.0, c0 in -20.0f64..20.0) {
        let s = spec(seed, n, r, 0);
        let p = TransformParams::new(c1, c0);
        let d = delta(&s, p, DeltaVariant::D1Plus).unwrap();
        let reduced = s.psi(r + 1) - c1 * s.phi(r) - c0;
        prop_assert!((d - reduced).abs() <= 1e-12 * (1.0 + reduced.abs()));
    }

    #[test]
    fn objective_is_infinite_exactly_when_infeasible(
        seed in any::<u64>(), (n, r, j) in block(), v in variant(), c1 in 0.01f64..5.0, c0 in -20.0f64..20.0,
    ) {
        let s = spec(seed, n, r, j);
        let p = TransformParams::new(v.sign() * c1, c0);
        let o = objective(&s, p, v);
        let f = feasibility(&s, p, v);
        prop_assert_eq!(o.is_infinite(), !f.feasible);
        if f.feasible {
            prop_assert!(o >= 0.0);
        }
    }

    #[test]
    fn objective_is_scale_equivariant(
        seed in any::<u64>(), (n, r, j) in block(), v in variant(), c1 in 0.01f64..5.0, c0 in -20.0f64..20.0, scale in 0.01f64..100.0,
    ) {
        let s = spec(seed, n, r, j);
        let scaled = ComparisonSpec::new(&s.phi.scaled(scale), &s.psi.scaled(scale), j, r, false, false).unwrap();
        let p = TransformParams::new(v.sign() * c1, c0);
        let q = TransformParams::new(p.c1, scale * c0);
        let (a, b) = (objective(&s, p, v), objective(&scaled, q, v));
        if a.is_finite() && b.is_finite() {
            prop_assert!((a - b).abs() <= 1e-8 * (1.0 + a), "{} vs {}", a, b);
        } else {
            // feasibility can only flip within the strictness margin
            let m = feasibility(&s, p, v).strictness_margin;
            prop_assert!(a.is_infinite() == b.is_infinite() || m.abs() <= 1e-6 * (1.0 + delta(&s, p, v).unwrap().abs()), "{} vs {}, margin {}", a, b, m);
        }
    }

    #[test]
    fn objective_tends_to_one_at_boundary_blocks(seed in any::<u64>(), (n, r, _j) in block(), top in any::<bool>()) {
        let s = spec(seed, n, r, if top { 0 } else { n - r });
        let c0 = 1e6 * (1.0 + s.phi_norm + s.psi_norm);
        let mut seen = 0;
        for p in [TransformParams::new(1.0, c0), TransformParams::new(1.0, -c0)] {
            for v in [DeltaVariant::D1Plus, DeltaVariant::D2Plus] {
                let f = feasibility(&s, p, v);
                if f.constraint_residuals.iter().all(|&(_, x)| x > 0.0) {
                    seen += 1;
                    let o = spectral_norm_value(&s.residual_matrix(p)) / f.delta;
                    prop_assert!((o - 1.0).abs() <= 1e-3);
                }
            }
        }
        prop_assert!(seen > 0);
    }
}
