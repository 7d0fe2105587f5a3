mod common;

use common::{random_orthogonal, random_symmetric, rng};
use dkext::eigh;
use dkext::subspace::{
    block, principal_cosines, rho1, rho1_from_cosines, rho2, rho2_from_cosines, scaling_constant, EigenvectorBlock,
};
use proptest::prelude::*;

fn pair(seed: u64, n: usize, r: usize, j1: usize, j2: usize) -> (EigenvectorBlock, EigenvectorBlock) {
    let mut g = rng(seed);
    let a = eigh(&random_symmetric(n, &mut g)).unwrap();
    let b = eigh(&random_symmetric(n, &mut g)).unwrap();
    (
        block(&a, j1 % (n - r + 1), r, false).unwrap(),
        block(&b, j2 % (n - r + 1), r, seed.is_multiple_of(2)).unwrap(),
    )
}

fn rotated(w: &EigenvectorBlock, seed: u64) -> EigenvectorBlock {
    let q = random_orthogonal(w.r, &mut rng(seed));
    EigenvectorBlock {
        j: w.j,
        r: w.r,
        basis: w.basis.matmul(&q).unwrap(),
    }
}

fn dims() -> impl Strategy<Value = (usize, usize)> {
    (2usize..30).prop_flat_map(|n| (Just(n), 1..n))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rescaled_rho1_is_below_rho2(seed in any::<u64>(), (n, r) in dims(), j1 in 0usize..30, j2 in 0usize..30) {
        let (w, v) = pair(seed, n, r, j1, j2);
        let c = scaling_constant(n, r);
        prop_assert!(rho1(&w, &v).unwrap() / c <= rho2(&w, &v).unwrap() + 1e-9);
        prop_assert!(rho1(&w, &v).unwrap() <= c + 1e-9);
    }

    #[test]
    fn metrics_are_symmetric_and_rotation_invariant(seed in any::<u64>(), (n, r) in dims(), j1 in 0usize..30, j2 in 0usize..30) {
        let (w, v) = pair(seed, n, r, j1, j2);
        let (a1, a2) = (rho1(&w, &v).unwrap(), rho2(&w, &v).unwrap());
        prop_assert!((a1 - rho1(&v, &w).unwrap()).abs() <= 1e-9);
        prop_assert!((a2 - rho2(&v, &w).unwrap()).abs() <= 1e-9);
        let (wq, vq) = (rotated(&w, seed ^ 1), rotated(&v, seed ^ 2));
        prop_assert!((a1 - rho1(&wq, &vq).unwrap()).abs() <= 1e-8);
        prop_assert!((a2 - rho2(&wq, &vq).unwrap()).abs() <= 1e-8);
    }

    #[test]
    fn ranges_and_dual_formulas(seed in any::<u64>(), (n, r) in dims(), j1 in 0usize..30, j2 in 0usize..30) {
        let (w, v) = pair(seed, n, r, j1, j2);
        let d2 = rho2(&w, &v).unwrap();
        prop_assert!((0.0..=1.0).contains(&d2));
        for c in principal_cosines(&w, &v).unwrap() {
            prop_assert!((0.0..=1.0).contains(&c));
        }
        prop_assert!((rho1(&w, &v).unwrap() - rho1_from_cosines(&w, &v).unwrap()).abs() <= 1e-8);
        prop_assert!((d2 - rho2_from_cosines(&w, &v).unwrap()).abs() <= 1e-8);
    }
}
