//! The phase space `T*G~_k = G~ x g~*` (left trivialization) with the
//! twist level `k`.
//!
//! Group loops live on a grid and are differentiated spectrally; algebra
//! loops live in Fourier space. [`MatrixField::from_loop`] and
//! [`MatrixField::to_loop`] are the only crossings between the two.

pub mod checks;
pub mod grid;
pub mod group;
pub mod poisson;

use std::sync::Arc;

use num_complex::Complex64;

pub use grid::MatrixField;
pub use group::{GroupLoop, DEFAULT_GRID};
pub use poisson::{momentum_functional, poisson, AdmissibleFunction, MomentumCombination, MomentumKind, Weight};

use crate::affine::AffineCovector;
use crate::algebra::OrthogonalAlgebra;
use crate::error::{Error, Result};
use crate::loops::LoopElement;
use crate::mutation::{factor, Site};

/// A point `(g, mu)` of `T*G~_k`, together with the level `k`.
#[derive(Debug, Clone)]
pub struct PhasePoint {
    pub g: GroupLoop,
    pub mu: LoopElement,
    pub k: Complex64,
}

impl PhasePoint {
    pub fn new(g: GroupLoop, mu: LoopElement, k: Complex64) -> Result<Self> {
        let alg = g.algebra();
        if !Arc::ptr_eq(alg, mu.algebra()) && **alg != **mu.algebra() {
            return Err(Error::AlgebraMismatch);
        }
        let m = g.grid_size();
        if m <= 2 * mu.band() {
            return Err(Error::AliasRisk { band: mu.band(), grid: m });
        }
        Ok(Self { g, mu, k })
    }

    pub fn algebra(&self) -> &Arc<OrthogonalAlgebra> {
        self.g.algebra()
    }

    pub fn grid_size(&self) -> usize {
        self.g.grid_size()
    }

    pub fn with_mu(&self, mu: LoopElement) -> Result<Self> {
        Self::new(self.g.clone(), mu, self.k)
    }

    pub fn with_g(&self, g: GroupLoop) -> Result<Self> {
        Self::new(g, self.mu.clone(), self.k)
    }

    fn mu_field(&self) -> Result<MatrixField> {
        MatrixField::from_loop(&self.mu, self.grid_size())
    }
}

/// `J^L = g mu g^{-1} + k g' g^{-1}` on the grid.
pub fn momentum_left_field(p: &PhasePoint) -> Result<MatrixField> {
    let transport = p.g.conjugate_field(&p.mu)?;
    let (left, _) = p.g.log_derivatives()?;
    transport.add(&left.scale(p.k * factor(Site::MomentumLeftLevel)))
}

/// Left momentum map `J^L(g, mu) = g mu g^{-1} + k g' g^{-1}`.
pub fn momentum_left(p: &PhasePoint) -> Result<LoopElement> {
    momentum_left_field(p)?.to_loop(p.algebra())
}

/// Right momentum map `J^R(g, mu) = -mu`.
pub fn momentum_right(p: &PhasePoint) -> LoopElement {
    p.mu.scale(Complex64::new(-factor(Site::MomentumRightSign), 0.0))
}

/// Scalar momentum of the derivation action,
/// `int (g^{-1} g', mu) + 1/2 k int (g^{-1} g', g^{-1} g')`, by grid
/// quadrature. The complex value is returned; its real pairing with `z` is
/// `Re(z J)`.
pub fn momentum_scalar(p: &PhasePoint) -> Result<Complex64> {
    let (_, right) = p.g.log_derivatives()?;
    let mu = p.mu_field()?;
    Ok(right.quadrature(&mu)? + 0.5 * p.k * factor(Site::MomentumScalarLevel) * right.quadrature(&right)?)
}

/// Left action `L_h(g, mu) = (h g, mu)`.
pub fn act_left(h: &GroupLoop, p: &PhasePoint) -> Result<PhasePoint> {
    PhasePoint::new(h.mul(&p.g)?, p.mu.clone(), p.k)
}

/// Right action `R_{h^{-1}}(g, mu) = (g h^{-1}, h mu h^{-1} + k h' h^{-1})`.
pub fn act_right(h: &GroupLoop, p: &PhasePoint) -> Result<PhasePoint> {
    h.check_grid(&p.g)?;
    let transport = h.conjugate_field(&p.mu)?;
    let (left, _) = h.log_derivatives()?;
    let mu = transport.add(&left.scale(p.k * factor(Site::RightActionLevel)))?.to_loop(p.algebra())?;
    PhasePoint::new(p.g.mul(&h.inverse())?, mu, p.k)
}

/// `t -> (e^{tX} g, mu)`: the curve generated by the left action.
pub fn left_curve(p: &PhasePoint, x: &LoopElement, t: f64) -> Result<PhasePoint> {
    let e = GroupLoop::exp_loop(&x.scale(Complex64::new(t, 0.0)), p.grid_size())?;
    PhasePoint::new(e.mul(&p.g)?, p.mu.clone(), p.k)
}

/// `t -> (g e^{-tX}, e^{tX} mu e^{-tX} + t k X')`: the curve generated by
/// the right action.
pub fn right_curve(p: &PhasePoint, x: &LoopElement, t: f64) -> Result<PhasePoint> {
    let e = GroupLoop::exp_loop(&x.scale(Complex64::new(t, 0.0)), p.grid_size())?;
    let transport = e.conjugate_field(&p.mu)?;
    let twist = MatrixField::from_loop(&x.derivative(), p.grid_size())?.scale(p.k * t * factor(Site::FlowRightLevel));
    let mu = transport.add(&twist)?.to_loop(p.algebra())?;
    PhasePoint::new(p.g.mul(&e.inverse())?, mu, p.k)
}

/// `t -> (g e^{t z g^{-1} g'}, mu + t z mu')`: the curve generated by the
/// derivation action.
pub fn central_curve(p: &PhasePoint, z: Complex64, t: f64) -> Result<PhasePoint> {
    let (_, right) = p.g.log_derivatives()?;
    let e = GroupLoop::exp_field(p.algebra(), &right.scale(z * t))?;
    let mu = p.mu.add_scaled(&p.mu.derivative(), z * t * factor(Site::FlowCentralFiber))?;
    PhasePoint::new(p.g.mul(&e)?, mu, p.k)
}

/// The three generator curves evaluated at parameter `t`.
#[derive(Debug, Clone)]
pub struct FlowCurves {
    pub left: PhasePoint,
    pub right: PhasePoint,
    pub central: PhasePoint,
}

pub fn flow_curves(p: &PhasePoint, x: &LoopElement, z: Complex64, t: f64) -> Result<FlowCurves> {
    Ok(FlowCurves { left: left_curve(p, x, t)?, right: right_curve(p, x, t)?, central: central_curve(p, z, t)? })
}

/// The combined map `(scalar momentum, J^L, k)` into the affine dual.
pub fn big_s(p: &PhasePoint) -> Result<AffineCovector> {
    Ok(AffineCovector::new(momentum_scalar(p)?, momentum_left(p)?, p.k))
}

/// Twist 2-form on the base: `Re int (X, k Y')` for tangent vectors given
/// by `g e^{tX}` and `g e^{tY}`. It is left-invariant, so `g` only fixes
/// the algebra.
pub fn omega_twist(g: &GroupLoop, x: &LoopElement, y: &LoopElement, k: Complex64) -> Result<f64> {
    if !Arc::ptr_eq(g.algebra(), x.algebra()) && **g.algebra() != **x.algebra() {
        return Err(Error::AlgebraMismatch);
    }
    Ok((k * factor(Site::TwistForm) * x.pair(&y.derivative())?).re)
}
