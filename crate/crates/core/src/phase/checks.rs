//! Residual checks for the momentum maps, the Poisson relations and the
//! composite invariant on the phase space.
//!
//! Every check returns a nonnegative residual; callers compare it with a
//! tolerance.

use num_complex::Complex64;

use super::group::GroupLoop;
use super::poisson::{momentum_functional, poisson, AdmissibleFunction, MomentumCombination, MomentumKind, Weight};
use super::{
    act_left, act_right, big_s, central_curve, left_curve, momentum_left, momentum_left_field, momentum_right,
    momentum_scalar, omega_twist, right_curve, MatrixField, PhasePoint,
};
use crate::affine::{bar_bracket, dual_pair, kappa, AffineVector};
use crate::error::{Error, Result};
use crate::loops::LoopElement;

/// Central-difference steps, coarse then fine.
pub const FD_STEPS: [f64; 2] = [1e-4, 1e-5];

/// `d/dt f(t)` at `t = 0` from central differences at both [`FD_STEPS`],
/// combined by one Richardson step.
pub fn fd_derivative<F>(f: F) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    let central = |h: f64| -> Result<f64> { Ok((f(h)? - f(-h)?) / (2.0 * h)) };
    let coarse = central(FD_STEPS[0])?;
    let fine = central(FD_STEPS[1])?;
    let ratio = (FD_STEPS[0] / FD_STEPS[1]).powi(2);
    Ok(fine + (fine - coarse) / (ratio - 1.0))
}

/// Derivative of `phi` along the generator curve of the action matching
/// `kind`, against `{phi, H}` with `H` the corresponding momentum
/// functional.
pub fn check_momentum_equation(
    kind: MomentumKind,
    weight: &Weight,
    phi: &AdmissibleFunction,
    p: &PhasePoint,
) -> Result<f64> {
    let h = momentum_functional(kind, weight.clone())?;
    let along = match weight {
        Weight::Loop(x) => match kind {
            MomentumKind::Left => fd_derivative(|t| phi.value(&left_curve(p, x, t)?))?,
            _ => fd_derivative(|t| phi.value(&right_curve(p, x, t)?))?,
        },
        Weight::Scalar(z) => fd_derivative(|t| phi.value(&central_curve(p, *z, t)?))?,
    };
    Ok((along - poisson(phi, &h, p)?).abs())
}

/// `|J - (1/2k) int ((J^L, J^L) - (J^R, J^R))|` with complex values.
pub fn check_scalar_momentum_identity(p: &PhasePoint) -> Result<f64> {
    if p.k == Complex64::new(0.0, 0.0) {
        return Err(Error::DivisionByCenter);
    }
    let m = p.grid_size();
    let left = momentum_left_field(p)?;
    let right = MatrixField::from_loop(&momentum_right(p), m)?;
    let expect = (left.quadrature(&left)? - right.quadrature(&right)?) / (2.0 * p.k);
    Ok((momentum_scalar(p)? - expect).norm())
}

/// `|kappa(S(p)) + 1/2 int (J^R, J^R)|`.
pub fn check_casimir_identity(p: &PhasePoint) -> Result<f64> {
    let jr = momentum_right(p);
    Ok((kappa(&big_s(p)?)? + 0.5 * jr.pair(&jr)?).norm())
}

/// `|kappa(S(L_h p)) - kappa(S(p))|`.
pub fn check_composite_left_invariance(h: &GroupLoop, p: &PhasePoint) -> Result<f64> {
    let moved = act_left(h, p)?;
    Ok((kappa(&big_s(&moved)?)? - kappa(&big_s(p)?)?).norm())
}

/// `|J^L(R_{h^{-1}} p) - J^L(p)|` on the grid.
pub fn check_right_action_invariance(h: &GroupLoop, p: &PhasePoint) -> Result<f64> {
    momentum_left_field(&act_right(h, p)?)?.max_diff(&momentum_left_field(p)?)
}

/// Bracket of `Re(z J) + <J^L, X>` and `Re(zeta J) + <J^L, Y>` against the
/// pairing of `S(p)` with the affine bracket of `(z, X, a)` and
/// `(zeta, Y, b)`.
pub fn check_cocycle_relation(
    z: Complex64,
    x: &LoopElement,
    zeta: Complex64,
    y: &LoopElement,
    a: Complex64,
    b: Complex64,
    p: &PhasePoint,
) -> Result<f64> {
    let zero = LoopElement::zero(p.algebra());
    let f1 = MomentumCombination::new(z, x.clone(), zero.clone()).functional();
    let f2 = MomentumCombination::new(zeta, y.clone(), zero).functional();
    let bracket = bar_bracket(&AffineVector::new(z, x.clone(), a), &AffineVector::new(zeta, y.clone(), b))?;
    Ok((poisson(&f1, &f2, p)? - dual_pair(&big_s(p)?, &bracket)?).abs())
}

/// Derivative of `Re(<xi, J^L> + <J^R, eta>)` along
/// `t -> (g e^{tX}, mu + t nu)` against
/// `Re(<g^{-1} xi g, nu + [X, mu] + k X'> - <eta, nu>)`.
pub fn check_independence_formula(
    xi: &LoopElement,
    eta: &LoopElement,
    x: &LoopElement,
    nu: &LoopElement,
    p: &PhasePoint,
) -> Result<f64> {
    let phi = |q: &PhasePoint| -> Result<f64> { Ok((momentum_left(q)?.pair(xi)? + momentum_right(q).pair(eta)?).re) };
    let along = fd_derivative(|t| {
        let e = GroupLoop::exp_loop(&x.scale(Complex64::new(t, 0.0)), p.grid_size())?;
        let mu = p.mu.add_scaled(nu, Complex64::new(t, 0.0))?;
        phi(&PhasePoint::new(p.g.mul(&e)?, mu, p.k)?)
    })?;
    let direction = nu.add(&x.bracket(&p.mu)?)?.add_scaled(&x.derivative(), p.k)?;
    let closed = p.g.conjugate_inverse(xi)?.pair(&direction)? - eta.pair(nu)?;
    Ok((along - closed.re).abs())
}

/// Largest relative error of the analytic fiber gradient and base
/// derivative of `phi` against finite differences along `mu + t nu` and
/// `g e^{tY}`.
pub fn check_functional_gradients(
    phi: &AdmissibleFunction,
    nu: &LoopElement,
    y: &LoopElement,
    p: &PhasePoint,
) -> Result<f64> {
    let fiber = fd_derivative(|t| phi.value(&p.with_mu(p.mu.add_scaled(nu, Complex64::new(t, 0.0))?)?))?;
    let fiber_an = nu.pair(&phi.fiber_grad(p)?)?.re;
    let base = fd_derivative(|t| {
        let e = GroupLoop::exp_loop(&y.scale(Complex64::new(t, 0.0)), p.grid_size())?;
        phi.value(&p.with_g(p.g.mul(&e)?)?)
    })?;
    let base_an = phi.base_deriv(p, y)?;
    let rel = |fd: f64, an: f64| (fd - an).abs() / (1.0 + an.abs());
    Ok(rel(fiber, fiber_an).max(rel(base, base_an)))
}

fn left(x: &LoopElement) -> Result<AdmissibleFunction> {
    momentum_functional(MomentumKind::Left, Weight::Loop(x.clone()))
}

fn right(x: &LoopElement) -> Result<AdmissibleFunction> {
    momentum_functional(MomentumKind::Right, Weight::Loop(x.clone()))
}

/// `|{<J^L,X>, <J^L,Y>} - <J^L,[X,Y]> - Re <X, kY'>|`.
pub fn check_left_brackets(x: &LoopElement, y: &LoopElement, p: &PhasePoint) -> Result<f64> {
    let lhs = poisson(&left(x)?, &left(y)?, p)?;
    let rhs = momentum_left(p)?.pair(&x.bracket(y)?)?.re + omega_twist(&p.g, x, y, p.k)?;
    Ok((lhs - rhs).abs())
}

/// `|{<J^R,X>, <J^R,Y>} - <J^R,[X,Y]> + Re <X, kY'>|`.
pub fn check_right_brackets(x: &LoopElement, y: &LoopElement, p: &PhasePoint) -> Result<f64> {
    let lhs = poisson(&right(x)?, &right(y)?, p)?;
    let rhs = momentum_right(p).pair(&x.bracket(y)?)?.re - omega_twist(&p.g, x, y, p.k)?;
    Ok((lhs - rhs).abs())
}

/// `|{<J^L,X>, <J^R,Y>}|`.
pub fn check_mixed_brackets(x: &LoopElement, y: &LoopElement, p: &PhasePoint) -> Result<f64> {
    Ok(poisson(&left(x)?, &right(y)?, p)?.abs())
}

/// `{F1, F2}` against its closed form on the momentum span.
pub fn check_combination_bracket(f1: &MomentumCombination, f2: &MomentumCombination, p: &PhasePoint) -> Result<f64> {
    let (g, constant) = f1.bracket(f2, p.k)?;
    let lhs = poisson(&f1.functional(), &f2.functional(), p)?;
    Ok((lhs - g.functional().value(p)? - constant).abs())
}

/// `|{F1,F2} + {F2,F1}|`.
pub fn check_antisymmetry(f1: &MomentumCombination, f2: &MomentumCombination, p: &PhasePoint) -> Result<f64> {
    let (a, b) = (f1.functional(), f2.functional());
    Ok((poisson(&a, &b, p)? + poisson(&b, &a, p)?).abs())
}

/// Jacobi sum `{{F1,F2},F3} + cyclic`, where the inner brackets are taken
/// in closed form on the momentum span.
pub fn check_poisson_jacobi(
    f1: &MomentumCombination,
    f2: &MomentumCombination,
    f3: &MomentumCombination,
    p: &PhasePoint,
) -> Result<f64> {
    let term = |a: &MomentumCombination, b: &MomentumCombination, c: &MomentumCombination| -> Result<f64> {
        let (ab, _) = a.bracket(b, p.k)?;
        poisson(&ab.functional(), &c.functional(), p)
    };
    Ok((term(f1, f2, f3)? + term(f2, f3, f1)? + term(f3, f1, f2)?).abs())
}

/// `|{F1 o L_h, F2 o L_h}(p) - {F1, F2}(L_h p)|`.
pub fn check_left_symplectic(
    f1: &MomentumCombination,
    f2: &MomentumCombination,
    h: &GroupLoop,
    p: &PhasePoint,
) -> Result<f64> {
    let pulled = poisson(&f1.left_transformed(h)?.functional(), &f2.left_transformed(h)?.functional(), p)?;
    let moved = poisson(&f1.functional(), &f2.functional(), &act_left(h, p)?)?;
    Ok((pulled - moved).abs())
}
