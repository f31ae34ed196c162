//! Property tests for the algebra, loop and affine layers.

use std::sync::Arc;

use affine_core::affine::{bar_jacobi_residual, coadjoint_duality_residual, grad_kappa, grad_pi, invariance_residual};
use affine_core::phase::{poisson, MomentumCombination};
use affine_core::sampling::{random_element, random_loop, seeded_rng, unit_disc, TestRng};
use affine_core::{AffineCovector, AffineVector, LoopElement, OrthogonalAlgebra};
use proptest::prelude::*;

fn algebra(which: bool) -> Arc<OrthogonalAlgebra> {
    Arc::new(if which { OrthogonalAlgebra::sl2() } else { OrthogonalAlgebra::so3() })
}

fn vector(alg: &Arc<OrthogonalAlgebra>, band: usize, rng: &mut TestRng) -> AffineVector {
    AffineVector::new(unit_disc(rng), random_loop(alg, band, rng), unit_disc(rng))
}

fn covector(alg: &Arc<OrthogonalAlgebra>, band: usize, rng: &mut TestRng) -> AffineCovector {
    AffineCovector::new(unit_disc(rng), random_loop(alg, band, rng), unit_disc(rng))
}

/// Pointwise bracket of two grid samplings.
fn grid_bracket(x: &LoopElement, y: &LoopElement, m: usize) -> Vec<Vec<affine_core::Complex64>> {
    let alg = x.algebra();
    let (gx, gy) = (x.to_grid(m).unwrap(), y.to_grid(m).unwrap());
    gx.iter().zip(&gy).map(|(a, b)| alg.bracket(a, b).unwrap().coeffs).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ad_invariance_and_jacobi(seed in any::<u64>(), which in any::<bool>()) {
        let alg = algebra(which);
        let mut rng = seeded_rng(seed);
        let (x, y, z) = (random_element(&alg, &mut rng), random_element(&alg, &mut rng), random_element(&alg, &mut rng));
        prop_assert!(alg.ad_invariance_residual(&x, &y, &z).unwrap() < 1e-12);
        prop_assert!(alg.jacobi_residual(&x, &y, &z).unwrap() < 1e-12);
        prop_assert!(alg.realization_residual(&x, &y).unwrap() < 1e-12);
    }

    #[test]
    fn cocycle_is_antisymmetric_and_closed(seed in any::<u64>(), which in any::<bool>(), band in 0usize..=8) {
        let alg = algebra(which);
        let mut rng = seeded_rng(seed);
        let (x, y, z) = (random_loop(&alg, band, &mut rng), random_loop(&alg, band, &mut rng), random_loop(&alg, band, &mut rng));
        let c = |a: &LoopElement, b: &LoopElement| a.central_cocycle(b).unwrap();
        prop_assert!((c(&x, &y) + c(&y, &x)).norm() < 1e-12);
        let cyclic = c(&x.bracket(&y).unwrap(), &z) + c(&y.bracket(&z).unwrap(), &x) + c(&z.bracket(&x).unwrap(), &y);
        prop_assert!(cyclic.norm() < 1e-11);
    }

    #[test]
    fn derivative_is_a_derivation(seed in any::<u64>(), which in any::<bool>(), band in 0usize..=8) {
        let alg = algebra(which);
        let mut rng = seeded_rng(seed);
        let (x, y) = (random_loop(&alg, band, &mut rng), random_loop(&alg, band, &mut rng));
        let lhs = x.bracket(&y).unwrap().derivative();
        let rhs = x.derivative().bracket(&y).unwrap().add(&x.bracket(&y.derivative()).unwrap()).unwrap();
        prop_assert!(lhs.max_diff(&rhs).unwrap() < 1e-12);
    }

    #[test]
    fn grid_and_fourier_brackets_agree(seed in any::<u64>(), which in any::<bool>(), band in 0usize..=8) {
        let alg = algebra(which);
        let mut rng = seeded_rng(seed);
        let (x, y) = (random_loop(&alg, band, &mut rng), random_loop(&alg, band, &mut rng));
        let fourier = x.bracket(&y).unwrap().to_grid(128).unwrap();
        let grid = grid_bracket(&x, &y, 128);
        let err = fourier
            .iter()
            .zip(&grid)
            .flat_map(|(a, b)| a.coeffs.iter().zip(b).map(|(u, v)| (u - v).norm()))
            .fold(0.0, f64::max);
        prop_assert!(err < 1e-12);
        let back = LoopElement::from_grid(&alg, &x.to_grid(128).unwrap()).unwrap();
        prop_assert!(back.max_diff(&x).unwrap() < 1e-13);
    }

    #[test]
    fn affine_identities(seed in any::<u64>(), which in any::<bool>()) {
        let alg = algebra(which);
        let mut rng = seeded_rng(seed);
        let (u, v, w) = (vector(&alg, 4, &mut rng), vector(&alg, 4, &mut rng), vector(&alg, 4, &mut rng));
        let mu = covector(&alg, 4, &mut rng);
        prop_assert!(bar_jacobi_residual(&u, &v, &w).unwrap() < 1e-10);
        prop_assert!(coadjoint_duality_residual(&u, &v, &mu).unwrap() < 1e-10);
        prop_assert!(invariance_residual(grad_kappa, &u, &mu).unwrap() < 1e-10);
        prop_assert_eq!(invariance_residual(grad_pi, &u, &mu).unwrap(), 0.0);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn poisson_bracket_is_bilinear(seed in any::<u64>(), which in any::<bool>(), s in -2.0f64..2.0) {
        use affine_core::phase::{GroupLoop, PhasePoint};
        let alg = algebra(which);
        let mut rng = seeded_rng(seed);
        let g = GroupLoop::exp_loop(&random_loop(&alg, 4, &mut rng), 128).unwrap();
        let p = PhasePoint::new(g, random_loop(&alg, 4, &mut rng), unit_disc(&mut rng)).unwrap();
        let mut comb = || MomentumCombination::new(unit_disc(&mut rng), random_loop(&alg, 4, &mut rng), random_loop(&alg, 4, &mut rng));
        let (f1, f2, f3) = (comb(), comb(), comb());
        let scaled = MomentumCombination::new(
            f2.z * s + f3.z,
            f2.left.scale(s.into()).add(&f3.left).unwrap(),
            f2.right.scale(s.into()).add(&f3.right).unwrap(),
        );
        let lhs = poisson(&f1.functional(), &scaled.functional(), &p).unwrap();
        let rhs = s * poisson(&f1.functional(), &f2.functional(), &p).unwrap()
            + poisson(&f1.functional(), &f3.functional(), &p).unwrap();
        prop_assert!((lhs - rhs).abs() < 1e-10 * (1.0 + lhs.abs()));
    }
}
