mod common;

use common::{random_orthogonal, random_symmetric, rng, separated_values, with_spectrum};
use dkext::dkcore::{feasibility, objective, standard_dk, ComparisonSpec, DeltaVariant, TransformParams};
use dkext::fracprog::{assemble_bound, solve_charnes_cooper, AssembleOptions};
use proptest::prelude::*;

/// `Psi` is a noisy affine image of `Phi`, so feasible subproblems are common.
fn spec(seed: u64, n: usize, r: usize, j: usize, noise: f64) -> ComparisonSpec {
    use rand::Rng;
    let mut g = rng(seed);
    let phi = with_spectrum(&random_orthogonal(n, &mut g), &separated_values(n, 0.2, &mut g));
    let e = random_symmetric(n, &mut g);
    let psi = phi.combine(g.random_range(0.3..3.0), &e, noise, g.random_range(-2.0..2.0));
    ComparisonSpec::new(&phi, &psi, j, r, false, false).unwrap()
}

fn block() -> impl Strategy<Value = (usize, usize, usize)> {
    (3usize..12)
        .prop_flat_map(|n| (Just(n), 1..n))
        .prop_flat_map(|(n, r)| (Just(n), Just(r), 0..=n - r))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn solutions_are_verified_and_beat_the_identity(seed in any::<u64>(), (n, r, j) in block(), noise in 0.0f64..0.5) {
        let s = spec(seed, n, r, j, noise);
        prop_assume!(!s.is_degenerate());
        for v in DeltaVariant::ALL {
            let sol = solve_charnes_cooper(&s, v);
            let id = objective(&s, TransformParams::IDENTITY, v);
            if id.is_finite() {
                prop_assert!(sol.feasible);
                prop_assert!(sol.objective_unscaled <= id + 1e-8 * (1.0 + id));
            }
            if !sol.feasible {
                continue;
            }
            let f = feasibility(&s, sol.params, v);
            prop_assert!(f.feasible && f.strictness_margin > 0.0);
            if !sol.supremum && !sol.exact_match {
                let direct = objective(&s, sol.params, v);
                prop_assert!((direct - sol.objective_unscaled).abs() <= 1e-8 * direct.max(1e-300));
            }
        }
    }

    #[test]
    fn assembled_bound_respects_the_chain(seed in any::<u64>(), (n, r, j) in block(), noise in 0.0f64..2.0) {
        let s = spec(seed, n, r, j, noise);
        let rep = assemble_bound(&s, &AssembleOptions::default()).unwrap();
        prop_assert!(rep.rho1_rescaled <= rep.rho2 + 1e-9);
        prop_assert!(rep.rho2 <= rep.extended_bound_rescaled + 1e-9);
        prop_assert!(rep.extended_bound_rescaled <= 1.0 + 1e-9);
        let std = standard_dk(&s);
        if std.feasible {
            prop_assert!(rep.extended_bound_rescaled <= rep.standard_dk_rescaled + 1e-8);
        }
    }

    #[test]
    fn boundary_blocks_never_exceed_the_trivial_bound(seed in any::<u64>(), (n, r, _j) in block(), noise in 0.0f64..3.0, top in any::<bool>()) {
        let s = spec(seed, n, r, if top { 0 } else { n - r }, noise);
        prop_assume!(!s.is_degenerate());
        let rep = assemble_bound(&s, &AssembleOptions::default()).unwrap();
        let best = rep.best.map_or(f64::INFINITY, |b| b.objective_unscaled);
        prop_assert!(best <= 1.0 + 1e-6);
    }
}
