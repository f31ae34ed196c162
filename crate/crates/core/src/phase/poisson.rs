//! Poisson bracket of the twisted cotangent bundle and the momentum
//! functionals `<J^L, X>`, `<J^R, X>` and `Re(z J)`.
//!
//! A function on `T*G~_k` enters the bracket only through its fiber
//! gradient (a loop, relative to the pairing `Re int (., .)`) and its
//! derivative along `t -> g e^{tY}`:
//!
//! ```text
//! {phi, psi} = D phi(grad psi) - D psi(grad phi)
//!            - Re int (mu, [grad phi, grad psi]) - Re int (k grad phi, (grad psi)')
//! ```

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use super::group::GroupLoop;
use super::{momentum_left, momentum_right, momentum_scalar, PhasePoint};
use crate::error::{Error, Result};
use crate::loops::LoopElement;
use crate::mutation::{factor, Site};

type ValueFn = dyn Fn(&PhasePoint) -> Result<f64> + Send + Sync;
type GradFn = dyn Fn(&PhasePoint) -> Result<LoopElement> + Send + Sync;
type BaseFn = dyn Fn(&PhasePoint, &LoopElement) -> Result<f64> + Send + Sync;

/// A real function on the phase space with analytic partial derivatives.
#[derive(Clone)]
pub struct AdmissibleFunction {
    value: Arc<ValueFn>,
    fiber_grad: Arc<GradFn>,
    base_deriv: Arc<BaseFn>,
}

impl fmt::Debug for AdmissibleFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("AdmissibleFunction")
    }
}

impl AdmissibleFunction {
    pub fn new<V, G, B>(value: V, fiber_grad: G, base_deriv: B) -> Self
    where
        V: Fn(&PhasePoint) -> Result<f64> + Send + Sync + 'static,
        G: Fn(&PhasePoint) -> Result<LoopElement> + Send + Sync + 'static,
        B: Fn(&PhasePoint, &LoopElement) -> Result<f64> + Send + Sync + 'static,
    {
        Self { value: Arc::new(value), fiber_grad: Arc::new(fiber_grad), base_deriv: Arc::new(base_deriv) }
    }

    pub fn value(&self, p: &PhasePoint) -> Result<f64> {
        (self.value)(p)
    }

    /// Gradient of `mu -> phi(g, mu)` relative to `Re int (., .)`.
    pub fn fiber_grad(&self, p: &PhasePoint) -> Result<LoopElement> {
        (self.fiber_grad)(p)
    }

    /// `d/dt phi(g e^{tY}, mu)` at `t = 0`.
    pub fn base_deriv(&self, p: &PhasePoint, y: &LoopElement) -> Result<f64> {
        (self.base_deriv)(p, y)
    }

    /// Pointwise sum of two functions.
    pub fn sum(&self, other: &Self) -> Self {
        let (a, b) = (self.clone(), other.clone());
        let (ga, gb) = (self.clone(), other.clone());
        let (da, db) = (self.clone(), other.clone());
        Self::new(
            move |p| Ok(a.value(p)? + b.value(p)?),
            move |p| ga.fiber_grad(p)?.add(&gb.fiber_grad(p)?),
            move |p, y| Ok(da.base_deriv(p, y)? + db.base_deriv(p, y)?),
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MomentumKind {
    Left,
    Right,
    Scalar,
}

impl MomentumKind {
    pub fn name(self) -> &'static str {
        match self {
            MomentumKind::Left => "left",
            MomentumKind::Right => "right",
            MomentumKind::Scalar => "scalar",
        }
    }
}

#[derive(Debug, Clone)]
pub enum Weight {
    Loop(LoopElement),
    Scalar(Complex64),
}

/// Packages `<J^L, X>`, `<J^R, X>` or `Re(z J)` with analytic gradients.
pub fn momentum_functional(kind: MomentumKind, weight: Weight) -> Result<AdmissibleFunction> {
    match (kind, weight) {
        (MomentumKind::Left, Weight::Loop(x)) => Ok(left_functional(x)),
        (MomentumKind::Right, Weight::Loop(x)) => Ok(right_functional(x)),
        (MomentumKind::Scalar, Weight::Scalar(z)) => Ok(scalar_functional(z)),
        (kind, _) => Err(Error::KindMismatch { kind: kind.name() }),
    }
}

/// `<J^L, X>`: gradient `g^{-1} X g`, base derivative
/// `<[Y, mu] + k Y', g^{-1} X g>`.
fn left_functional(x: LoopElement) -> AdmissibleFunction {
    let (xv, xg, xb) = (x.clone(), x.clone(), x);
    AdmissibleFunction::new(
        move |p| Ok(momentum_left(p)?.pair(&xv)?.re),
        move |p| p.g.conjugate_inverse(&xg),
        move |p, y| {
            let w = p.g.conjugate_inverse(&xb)?;
            let dir = y.bracket(&p.mu)?.add_scaled(&y.derivative(), p.k * factor(Site::LeftBaseLevel))?;
            Ok(dir.pair(&w)?.re)
        },
    )
}

/// `<J^R, X>`: gradient `-X`, base derivative 0.
fn right_functional(x: LoopElement) -> AdmissibleFunction {
    let (xv, xg) = (x.clone(), x);
    AdmissibleFunction::new(
        move |p| Ok(momentum_right(p).pair(&xv)?.re),
        move |_| Ok(xg.scale(Complex64::new(-factor(Site::RightFiberGrad), 0.0))),
        |_, _| Ok(0.0),
    )
}

/// `Re(z J)`: gradient `z g^{-1} g'`, base derivative
/// `<[A, Y] + Y', z mu> + <[A, Y] + Y', z k A>` with `A = g^{-1} g'`.
fn scalar_functional(z: Complex64) -> AdmissibleFunction {
    AdmissibleFunction::new(
        move |p| Ok((z * momentum_scalar(p)?).re),
        move |p| Ok(p.g.right_log_derivative_loop()?.scale(z * factor(Site::ScalarFiberGrad))),
        move |p, y| {
            let a = p.g.right_log_derivative_loop()?;
            let ay = a.bracket(y)?;
            let dy = y.derivative();
            let transport = ay.add_scaled(&dy, Complex64::new(factor(Site::ScalarBaseTransport), 0.0))?;
            let level = ay.add(&dy)?;
            let first = transport.pair(&p.mu.scale(z))?;
            let second = level.pair(&a.scale(z * p.k))?;
            Ok((first + factor(Site::ScalarBaseLevel) * second).re)
        },
    )
}

/// The twisted Poisson bracket `{phi, psi}(p)`.
pub fn poisson(phi: &AdmissibleFunction, psi: &AdmissibleFunction, p: &PhasePoint) -> Result<f64> {
    let gphi = phi.fiber_grad(p)?;
    let gpsi = psi.fiber_grad(p)?;
    let base = phi.base_deriv(p, &gpsi)? - psi.base_deriv(p, &gphi)?;
    let coadjoint = p.mu.pair(&gphi.bracket(&gpsi)?)?.re * factor(Site::PoissonCoadjoint);
    let twist = (p.k * gphi.pair(&gpsi.derivative())?).re * factor(Site::PoissonTwist);
    Ok(base - coadjoint - twist)
}

/// `Re(z J) + <J^L, X> + <J^R, Y>`: the span of the momentum functionals.
#[derive(Debug, Clone)]
pub struct MomentumCombination {
    pub z: Complex64,
    pub left: LoopElement,
    pub right: LoopElement,
}

impl MomentumCombination {
    pub fn new(z: Complex64, left: LoopElement, right: LoopElement) -> Self {
        Self { z, left, right }
    }

    pub fn functional(&self) -> AdmissibleFunction {
        scalar_functional(self.z).sum(&left_functional(self.left.clone())).sum(&right_functional(self.right.clone()))
    }

    /// Closed form of `{self, other}` as a combination plus the constant
    /// cocycle term `<X1, k X2'> - <Y1, k Y2'>`.
    pub fn bracket(&self, other: &Self, k: Complex64) -> Result<(Self, f64)> {
        let left = self
            .left
            .bracket(&other.left)?
            .add_scaled(&other.left.derivative(), self.z)?
            .add_scaled(&self.left.derivative(), -other.z)?;
        let right = self
            .right
            .bracket(&other.right)?
            .add_scaled(&other.right.derivative(), self.z)?
            .add_scaled(&self.right.derivative(), -other.z)?;
        let constant =
            (k * self.left.pair(&other.left.derivative())?).re - (k * self.right.pair(&other.right.derivative())?).re;
        Ok((Self::new(Complex64::new(0.0, 0.0), left, right), constant))
    }

    /// Combination equal to `self o L_h` up to an additive constant:
    /// `X -> h^{-1} X h + z h^{-1} h'`, with `z` and `Y` unchanged.
    pub fn left_transformed(&self, h: &GroupLoop) -> Result<Self> {
        let moved = h.conjugate_inverse(&self.left)?.add_scaled(&h.right_log_derivative_loop()?, self.z)?;
        Ok(Self::new(self.z, moved, self.right.clone()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::OrthogonalAlgebra;
    use crate::phase::{left_curve, momentum_left};
    use crate::sampling::{random_loop, seeded_rng, unit_disc, TestRng};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn point(alg: &Arc<OrthogonalAlgebra>, rng: &mut TestRng, k: Complex64) -> PhasePoint {
        let g = GroupLoop::exp_loop(&random_loop(alg, 4, rng), 128).unwrap();
        PhasePoint::new(g, random_loop(alg, 4, rng), k).unwrap()
    }

    /// Central difference with a single step; adequate for these smooth
    /// one-dimensional restrictions.
    fn fd(f: impl Fn(f64) -> f64) -> f64 {
        let h = 1e-5;
        (f(h) - f(-h)) / (2.0 * h)
    }

    #[test]
    fn kind_weight_mismatch() {
        let alg = Arc::new(OrthogonalAlgebra::sl2());
        let err = momentum_functional(MomentumKind::Left, Weight::Scalar(c(1.0, 0.0))).unwrap_err();
        assert_eq!(err, Error::KindMismatch { kind: "left" });
        let x = LoopElement::zero(&alg);
        assert!(momentum_functional(MomentumKind::Scalar, Weight::Loop(x)).is_err());
    }

    #[test]
    fn right_functional_value() {
        let alg = Arc::new(OrthogonalAlgebra::sl2());
        let mut rng = seeded_rng(1);
        let p = point(&alg, &mut rng, c(1.0, 0.0));
        let y = random_loop(&alg, 4, &mut rng);
        let f = momentum_functional(MomentumKind::Right, Weight::Loop(y.clone())).unwrap();
        let expect = p.mu.neg().pair(&y).unwrap().re;
        assert!((f.value(&p).unwrap() - expect).abs() < 1e-14);
    }

    #[test]
    fn self_bracket_vanishes() {
        let alg = Arc::new(OrthogonalAlgebra::so3());
        let mut rng = seeded_rng(2);
        let p = point(&alg, &mut rng, c(1.0, 0.5));
        let comb = MomentumCombination::new(
            unit_disc(&mut rng),
            random_loop(&alg, 4, &mut rng),
            random_loop(&alg, 4, &mut rng),
        );
        let f = comb.functional();
        assert!(poisson(&f, &f, &p).unwrap().abs() < 1e-12);
    }

    #[test]
    fn gradients_match_finite_differences() {
        let alg = Arc::new(OrthogonalAlgebra::sl2());
        let mut rng = seeded_rng(3);
        let p = point(&alg, &mut rng, c(1.0, 0.5));
        let x = random_loop(&alg, 4, &mut rng);
        let nu = random_loop(&alg, 4, &mut rng);
        let y = random_loop(&alg, 4, &mut rng);
        let functionals = [
            momentum_functional(MomentumKind::Left, Weight::Loop(x.clone())).unwrap(),
            momentum_functional(MomentumKind::Right, Weight::Loop(x.clone())).unwrap(),
            momentum_functional(MomentumKind::Scalar, Weight::Scalar(c(0.7, -0.4))).unwrap(),
        ];
        for f in &functionals {
            let along_fiber = fd(|t| f.value(&p.with_mu(p.mu.add_scaled(&nu, c(t, 0.0)).unwrap()).unwrap()).unwrap());
            let an = nu.pair(&f.fiber_grad(&p).unwrap()).unwrap().re;
            assert!((along_fiber - an).abs() < 1e-6 * (1.0 + an.abs()), "fiber {along_fiber} vs {an}");

            // g e^{tY}: the left curve of the right-translated point
            let along_base = fd(|t| {
                let e = GroupLoop::exp_loop(&y.scale(c(t, 0.0)), 128).unwrap();
                f.value(&p.with_g(p.g.mul(&e).unwrap()).unwrap()).unwrap()
            });
            let an = f.base_deriv(&p, &y).unwrap();
            assert!((along_base - an).abs() < 1e-6 * (1.0 + an.abs()), "base {along_base} vs {an}");
        }
    }

    #[test]
    fn left_momentum_generates_left_action() {
        let alg = Arc::new(OrthogonalAlgebra::sl2());
        let mut rng = seeded_rng(4);
        let p = point(&alg, &mut rng, c(1.0, 0.0));
        let x = random_loop(&alg, 4, &mut rng);
        let y = random_loop(&alg, 4, &mut rng);
        let phi = momentum_functional(MomentumKind::Left, Weight::Loop(y.clone())).unwrap();
        let jx = momentum_functional(MomentumKind::Left, Weight::Loop(x.clone())).unwrap();
        let lhs = fd(|t| momentum_left(&left_curve(&p, &x, t).unwrap()).unwrap().pair(&y).unwrap().re);
        let rhs = poisson(&phi, &jx, &p).unwrap();
        assert!((lhs - rhs).abs() < 1e-6 * (1.0 + rhs.abs()), "{lhs} vs {rhs}");
    }
}
