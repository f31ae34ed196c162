//! The identity table: every residual the runner knows how to evaluate.

use std::sync::Arc;

use affine_core::affine::{
    bar_jacobi_residual, coadjoint_duality_residual, grad_kappa, grad_pi, gradient_error, invariance_residual, kappa,
};
use affine_core::phase::checks::{
    check_antisymmetry, check_casimir_identity, check_cocycle_relation, check_combination_bracket,
    check_composite_left_invariance, check_functional_gradients, check_independence_formula, check_left_brackets,
    check_left_symplectic, check_mixed_brackets, check_momentum_equation, check_poisson_jacobi,
    check_right_action_invariance, check_right_brackets, check_scalar_momentum_identity,
};
use affine_core::phase::{
    momentum_functional, GroupLoop, MatrixField, MomentumCombination, MomentumKind, PhasePoint, Weight,
};
use affine_core::sampling::{random_element, random_loop, unit_disc};
use affine_core::{AffineCovector, AffineVector, AlgebraElement, Complex64, LoopElement, OrthogonalAlgebra, Result};

use crate::config::{Suite, SuiteConfig};
use crate::digest::DigestRng;

/// Which configured tolerance applies to an identity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Tol {
    Exact,
    Grid,
    Fd,
    Fixed(f64),
}

impl Tol {
    pub fn resolve(self, cfg: &SuiteConfig) -> f64 {
        match self {
            Tol::Exact => cfg.tol_exact,
            Tol::Grid => cfg.tol_grid,
            Tol::Fd => cfg.tol_fd,
            Tol::Fixed(t) => t,
        }
    }
}

/// Sampling context for one case.
pub struct Ctx {
    pub algebra: Arc<OrthogonalAlgebra>,
    pub band: usize,
    pub grid: usize,
    pub k: Complex64,
}

impl Ctx {
    fn element(&self, rng: &mut DigestRng) -> AlgebraElement {
        random_element(&self.algebra, rng)
    }

    fn loop_(&self, rng: &mut DigestRng) -> LoopElement {
        random_loop(&self.algebra, self.band, rng)
    }

    fn vector(&self, rng: &mut DigestRng) -> AffineVector {
        AffineVector::new(unit_disc(rng), self.loop_(rng), unit_disc(rng))
    }

    fn covector(&self, rng: &mut DigestRng) -> AffineCovector {
        AffineCovector::new(unit_disc(rng), self.loop_(rng), unit_disc(rng))
    }

    fn group(&self, rng: &mut DigestRng) -> Result<GroupLoop> {
        GroupLoop::exp_loop(&self.loop_(rng), self.grid)
    }

    fn point(&self, rng: &mut DigestRng) -> Result<PhasePoint> {
        let g = self.group(rng)?;
        PhasePoint::new(g, self.loop_(rng), self.k)
    }

    fn combination(&self, rng: &mut DigestRng) -> MomentumCombination {
        MomentumCombination::new(unit_disc(rng), self.loop_(rng), self.loop_(rng))
    }
}

pub type Eval = fn(&Ctx, &mut DigestRng) -> Result<f64>;

pub struct Identity {
    pub suite: Suite,
    pub name: &'static str,
    pub tol: Tol,
    /// Multiplier on the configured trial count.
    pub repeat: usize,
    /// Whether the identity is evaluated once per configured `k`.
    pub per_level: bool,
    pub eval: Eval,
}

macro_rules! identity {
    ($suite:ident, $name:literal, $tol:expr, $repeat:literal, $per_level:literal, $eval:expr) => {
        Identity { suite: Suite::$suite, name: $name, tol: $tol, repeat: $repeat, per_level: $per_level, eval: $eval }
    };
}

pub static IDENTITIES: &[Identity] = &[
    identity!(Algebra, "ad-invariance", Tol::Exact, 4, false, |c, r| {
        let (x, y, z) = (c.element(r), c.element(r), c.element(r));
        c.algebra.ad_invariance_residual(&x, &y, &z)
    }),
    identity!(Algebra, "jacobi", Tol::Exact, 4, false, |c, r| {
        let (x, y, z) = (c.element(r), c.element(r), c.element(r));
        c.algebra.jacobi_residual(&x, &y, &z)
    }),
    identity!(Algebra, "matrix-realization", Tol::Exact, 4, false, |c, r| {
        let (x, y) = (c.element(r), c.element(r));
        c.algebra.realization_residual(&x, &y)
    }),
    identity!(Loop, "cocycle-antisymmetry", Tol::Exact, 4, false, |c, r| {
        let (x, y) = (c.loop_(r), c.loop_(r));
        Ok((x.central_cocycle(&y)? + y.central_cocycle(&x)?).norm())
    }),
    identity!(Loop, "cocycle-closure", Tol::Exact, 4, false, |c, r| {
        let (x, y, z) = (c.loop_(r), c.loop_(r), c.loop_(r));
        let terms = [
            x.bracket(&y)?.central_cocycle(&z)?,
            y.bracket(&z)?.central_cocycle(&x)?,
            z.bracket(&x)?.central_cocycle(&y)?,
        ];
        let scale = terms.iter().map(|t| t.norm()).fold(1.0, f64::max);
        Ok(terms.iter().sum::<Complex64>().norm() / scale)
    }),
    identity!(Loop, "derivation-rule", Tol::Exact, 4, false, |c, r| {
        let (x, y) = (c.loop_(r), c.loop_(r));
        let lhs = x.bracket(&y)?.derivative();
        let rhs = x.derivative().bracket(&y)?.add(&x.bracket(&y.derivative())?)?;
        lhs.max_diff(&rhs)
    }),
    identity!(Loop, "grid-bracket", Tol::Grid, 4, false, |c, r| {
        let (x, y) = (c.loop_(r), c.loop_(r));
        let fourier = MatrixField::from_loop(&x.bracket(&y)?, c.grid)?;
        let (fx, fy) = (MatrixField::from_loop(&x, c.grid)?, MatrixField::from_loop(&y, c.grid)?);
        let pointwise = MatrixField::new(fx.samples().iter().zip(fy.samples()).map(|(a, b)| a * b - b * a).collect());
        fourier.max_diff(&pointwise)
    }),
    identity!(Loop, "grid-derivative", Tol::Grid, 4, false, |c, r| {
        let x = c.loop_(r);
        let fourier = MatrixField::from_loop(&x.derivative(), c.grid)?;
        MatrixField::from_loop(&x, c.grid)?.spectral_derivative()?.max_diff(&fourier)
    }),
    identity!(Affine, "bar-jacobi", Tol::Fixed(1e-10), 2, false, |c, r| {
        let (u, v, w) = (c.vector(r), c.vector(r), c.vector(r));
        bar_jacobi_residual(&u, &v, &w)
    }),
    identity!(Affine, "coadjoint-duality", Tol::Fixed(1e-10), 2, false, |c, r| {
        let (u, v, mu) = (c.vector(r), c.vector(r), c.covector(r));
        coadjoint_duality_residual(&u, &v, &mu)
    }),
    identity!(Affine, "kappa-invariance", Tol::Fixed(1e-10), 2, false, |c, r| {
        let (u, mu) = (c.vector(r), c.covector(r));
        invariance_residual(grad_kappa, &u, &mu)
    }),
    identity!(Affine, "center-invariance", Tol::Fixed(f64::MIN_POSITIVE), 2, false, |c, r| {
        let (u, mu) = (c.vector(r), c.covector(r));
        invariance_residual(grad_pi, &u, &mu)
    }),
    identity!(Affine, "kappa-gradient", Tol::Fd, 2, false, |c, r| {
        let mu = c.covector(r);
        gradient_error(kappa, grad_kappa, &mu)
    }),
    identity!(Phase, "independence-formula", Tol::Fd, 1, true, |c, r| {
        let p = c.point(r)?;
        let (xi, eta, x, nu) = (c.loop_(r), c.loop_(r), c.loop_(r), c.loop_(r));
        check_independence_formula(&xi, &eta, &x, &nu, &p)
    }),
    identity!(Phase, "left-brackets", Tol::Grid, 1, true, |c, r| {
        let p = c.point(r)?;
        check_left_brackets(&c.loop_(r), &c.loop_(r), &p)
    }),
    identity!(Phase, "right-brackets", Tol::Grid, 1, true, |c, r| {
        let p = c.point(r)?;
        check_right_brackets(&c.loop_(r), &c.loop_(r), &p)
    }),
    identity!(Phase, "mixed-brackets", Tol::Grid, 1, true, |c, r| {
        let p = c.point(r)?;
        check_mixed_brackets(&c.loop_(r), &c.loop_(r), &p)
    }),
    identity!(Phase, "scalar-momentum-identity", Tol::Grid, 1, true, |c, r| {
        check_scalar_momentum_identity(&c.point(r)?)
    }),
    identity!(Phase, "casimir-identity", Tol::Grid, 1, true, |c, r| check_casimir_identity(&c.point(r)?)),
    identity!(Phase, "casimir-left-invariance", Tol::Grid, 1, true, |c, r| {
        let p = c.point(r)?;
        check_composite_left_invariance(&c.group(r)?, &p)
    }),
    identity!(Phase, "right-action-invariance", Tol::Grid, 1, true, |c, r| {
        let p = c.point(r)?;
        check_right_action_invariance(&c.group(r)?, &p)
    }),
    identity!(Phase, "cocycle-relation", Tol::Grid, 1, true, |c, r| {
        let p = c.point(r)?;
        let (z, x, zeta, y) = (unit_disc(r), c.loop_(r), unit_disc(r), c.loop_(r));
        check_cocycle_relation(z, &x, zeta, &y, unit_disc(r), unit_disc(r), &p)
    }),
    identity!(Phase, "cocycle-derivation-compatibility", Tol::Grid, 1, true, |c, r| {
        let p = c.point(r)?;
        let zero = LoopElement::zero(&c.algebra);
        let one = Complex64::new(1.0, 0.0);
        let none = Complex64::new(0.0, 0.0);
        check_cocycle_relation(one, &zero, none, &c.loop_(r), none, none, &p)
    }),
    identity!(Phase, "cocycle-center-independence", Tol::Exact, 1, true, |c, r| {
        let p = c.point(r)?;
        let (z, x, zeta, y) = (unit_disc(r), c.loop_(r), unit_disc(r), c.loop_(r));
        let none = Complex64::new(0.0, 0.0);
        let base = check_cocycle_relation(z, &x, zeta, &y, none, none, &p)?;
        let moved = check_cocycle_relation(z, &x, zeta, &y, unit_disc(r) * 10.0, unit_disc(r) * 10.0, &p)?;
        Ok((base - moved).abs())
    }),
    identity!(Phase, "momentum-left", Tol::Fd, 1, true, |c, r| {
        let p = c.point(r)?;
        let (x, phi) = (c.loop_(r), c.combination(r).functional());
        check_momentum_equation(MomentumKind::Left, &Weight::Loop(x), &phi, &p)
    }),
    identity!(Phase, "momentum-right", Tol::Fd, 1, true, |c, r| {
        let p = c.point(r)?;
        let (x, phi) = (c.loop_(r), c.combination(r).functional());
        check_momentum_equation(MomentumKind::Right, &Weight::Loop(x), &phi, &p)
    }),
    identity!(Phase, "momentum-scalar", Tol::Fd, 1, true, |c, r| {
        let p = c.point(r)?;
        let (z, phi) = (unit_disc(r), c.combination(r).functional());
        check_momentum_equation(MomentumKind::Scalar, &Weight::Scalar(z), &phi, &p)
    }),
    identity!(Phase, "functional-gradients", Tol::Fd, 1, true, |c, r| {
        let p = c.point(r)?;
        let (x, z, nu, y) = (c.loop_(r), unit_disc(r), c.loop_(r), c.loop_(r));
        let mut worst = 0.0f64;
        for (kind, w) in [
            (MomentumKind::Left, Weight::Loop(x.clone())),
            (MomentumKind::Right, Weight::Loop(x)),
            (MomentumKind::Scalar, Weight::Scalar(z)),
        ] {
            worst = worst.max(check_functional_gradients(&momentum_functional(kind, w)?, &nu, &y, &p)?);
        }
        Ok(worst)
    }),
    identity!(Phase, "poisson-antisymmetry", Tol::Fixed(1e-10), 1, true, |c, r| {
        let p = c.point(r)?;
        check_antisymmetry(&c.combination(r), &c.combination(r), &p)
    }),
    identity!(Phase, "poisson-closed-form", Tol::Grid, 1, true, |c, r| {
        let p = c.point(r)?;
        check_combination_bracket(&c.combination(r), &c.combination(r), &p)
    }),
    identity!(Phase, "poisson-jacobi", Tol::Fixed(1e-7), 1, true, |c, r| {
        let p = c.point(r)?;
        check_poisson_jacobi(&c.combination(r), &c.combination(r), &c.combination(r), &p)
    }),
    identity!(Phase, "left-symplectic", Tol::Grid, 1, true, |c, r| {
        let p = c.point(r)?;
        let (f1, f2, h) = (c.combination(r), c.combination(r), c.group(r)?);
        check_left_symplectic(&f1, &f2, &h, &p)
    }),
];

pub fn find(suite: Suite, name: &str) -> Option<&'static Identity> {
    IDENTITIES.iter().find(|i| i.suite == suite && i.name == name)
}
