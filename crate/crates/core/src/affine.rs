//! The full affine algebra `C ⋉ (g~ ⊕ C)` and its dual.
//!
//! Vectors are triples `(z, X, a)`: `z` drives the derivation action
//! `z . X = z X'`, `X` is a loop and `a` is central. Covectors `(alpha, xi, e)`
//! pair with vectors through
//!
//! ```text
//! <(alpha, xi, e), (z, X, a)> = Re(alpha z + int (xi, X) dx + e a)
//! ```
//!
//! `e` is the level (center coefficient); it is fixed by every coadjoint
//! motion.

use std::sync::Arc;

use num_complex::Complex64;
use serde::Serialize;

use crate::algebra::OrthogonalAlgebra;
use crate::error::Result;
use crate::loops::LoopElement;
use crate::mutation::{factor, Site};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

#[derive(Debug, Clone, Serialize)]
pub struct AffineVector {
    #[serde(serialize_with = "ser_complex")]
    pub z: Complex64,
    pub x: LoopElement,
    #[serde(serialize_with = "ser_complex")]
    pub a: Complex64,
}

#[derive(Debug, Clone, Serialize)]
pub struct AffineCovector {
    #[serde(serialize_with = "ser_complex")]
    pub alpha: Complex64,
    pub xi: LoopElement,
    #[serde(serialize_with = "ser_complex")]
    pub e: Complex64,
}

impl AffineVector {
    pub fn new(z: Complex64, x: LoopElement, a: Complex64) -> Self {
        Self { z, x, a }
    }

    pub fn zero(algebra: &Arc<OrthogonalAlgebra>) -> Self {
        Self::new(ZERO, LoopElement::zero(algebra), ZERO)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        Ok(Self::new(self.z + other.z, self.x.add(&other.x)?, self.a + other.a))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        Ok(Self::new(self.z - other.z, self.x.sub(&other.x)?, self.a - other.a))
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self::new(self.z * s, self.x.scale(s), self.a * s)
    }

    /// Max norm over all three slots.
    pub fn max_norm(&self) -> f64 {
        self.z.norm().max(self.x.max_norm()).max(self.a.norm())
    }
}

impl AffineCovector {
    pub fn new(alpha: Complex64, xi: LoopElement, e: Complex64) -> Self {
        Self { alpha, xi, e }
    }

    pub fn zero(algebra: &Arc<OrthogonalAlgebra>) -> Self {
        Self::new(ZERO, LoopElement::zero(algebra), ZERO)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        Ok(Self::new(self.alpha + other.alpha, self.xi.add(&other.xi)?, self.e + other.e))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        Ok(Self::new(self.alpha - other.alpha, self.xi.sub(&other.xi)?, self.e - other.e))
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self::new(self.alpha * s, self.xi.scale(s), self.e * s)
    }

    pub fn max_norm(&self) -> f64 {
        self.alpha.norm().max(self.xi.max_norm()).max(self.e.norm())
    }

    /// Basis of real coordinate directions: `1` and `i` in each of `alpha`,
    /// `e`, and every coordinate of every mode of a loop of `band`.
    pub fn coordinate_directions(algebra: &Arc<OrthogonalAlgebra>, band: usize) -> Vec<AffineCovector> {
        let units = [Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0)];
        let zero_loop = LoopElement::zeros(algebra, band);
        let mut out = Vec::new();
        for u in units {
            out.push(Self::new(u, zero_loop.clone(), ZERO));
            out.push(Self::new(ZERO, zero_loop.clone(), u));
        }
        let b = band as i64;
        for n in -b..=b {
            for i in 0..algebra.dim() {
                for u in units {
                    let x = LoopElement::monomial(algebra, n, &algebra.basis_element(i).scale(u))
                        .expect("basis element matches algebra")
                        .padded(band);
                    out.push(Self::new(ZERO, x, ZERO));
                }
            }
        }
        out
    }
}

/// Lie bracket of the full affine algebra:
/// `[(z1, X, a), (z2, Y, b)] = (0, [X, Y] + z1 Y' - z2 X', int (X, Y'))`.
pub fn bar_bracket(u: &AffineVector, v: &AffineVector) -> Result<AffineVector> {
    let loop_part =
        u.x.bracket(&v.x)?
            .add_scaled(&v.x.derivative(), u.z * factor(Site::SemidirectLeft))?
            .add_scaled(&u.x.derivative(), -v.z * factor(Site::SemidirectRight))?;
    Ok(AffineVector::new(ZERO, loop_part, u.x.central_cocycle(&v.x)?))
}

/// Complex-bilinear pairing `alpha z + int (xi, X) + e a`.
pub fn pair_complex(mu: &AffineCovector, u: &AffineVector) -> Result<Complex64> {
    Ok(mu.alpha * u.z * factor(Site::PairingAlpha) + mu.xi.pair(&u.x)? + mu.e * u.a * factor(Site::PairingCenter))
}

/// The real duality pairing: real part of [`pair_complex`].
pub fn dual_pair(mu: &AffineCovector, u: &AffineVector) -> Result<f64> {
    Ok(pair_complex(mu, u)?.re)
}

/// Coadjoint action (minus the dual of `ad`):
/// `(int (xi, X'), [X, xi] + z xi' + e X', 0)`.
pub fn ad_star(u: &AffineVector, mu: &AffineCovector) -> Result<AffineCovector> {
    let dx = u.x.derivative();
    let alpha = mu.xi.pair(&dx)? * factor(Site::AdStarAlpha);
    let xi =
        u.x.bracket(&mu.xi)?
            .add_scaled(&mu.xi.derivative(), u.z * factor(Site::AdStarTransport))?
            .add_scaled(&dx, mu.e * factor(Site::AdStarLevel))?;
    Ok(AffineCovector::new(alpha, xi, ZERO))
}

/// `kappa(alpha, xi, e) = e alpha - 1/2 int (xi, xi)`.
pub fn kappa(mu: &AffineCovector) -> Result<Complex64> {
    Ok(mu.e * mu.alpha * factor(Site::KappaLevel) - 0.5 * factor(Site::KappaQuadratic) * mu.xi.pair(&mu.xi)?)
}

/// Projection onto the center coefficient.
pub fn pi_center(mu: &AffineCovector) -> Complex64 {
    mu.e
}

/// `grad kappa = (e, -xi, alpha)`.
pub fn grad_kappa(mu: &AffineCovector) -> AffineVector {
    AffineVector::new(mu.e, mu.xi.scale(Complex64::new(-factor(Site::GradKappa), 0.0)), mu.alpha)
}

/// `grad pi = (0, 0, 1)`.
pub fn grad_pi(mu: &AffineCovector) -> AffineVector {
    AffineVector::new(ZERO, LoopElement::zero(mu.xi.algebra()), Complex64::new(1.0, 0.0))
}

/// `|<mu, [u, grad F(mu)]>|` using the complex-bilinear pairing; zero for
/// every ad*-invariant `F`.
pub fn invariance_residual<G>(grad: G, u: &AffineVector, mu: &AffineCovector) -> Result<f64>
where
    G: Fn(&AffineCovector) -> AffineVector,
{
    Ok(pair_complex(mu, &bar_bracket(u, &grad(mu))?)?.norm())
}

/// Max-norm of the Jacobi sum `[[u,v],w] + [[v,w],u] + [[w,u],v]`.
pub fn bar_jacobi_residual(u: &AffineVector, v: &AffineVector, w: &AffineVector) -> Result<f64> {
    let a = bar_bracket(&bar_bracket(u, v)?, w)?;
    let b = bar_bracket(&bar_bracket(v, w)?, u)?;
    let c = bar_bracket(&bar_bracket(w, u)?, v)?;
    Ok(a.add(&b)?.add(&c)?.max_norm())
}

/// `|<ad*_u mu, v> + <mu, [u, v]>|` with the complex-bilinear pairing.
pub fn coadjoint_duality_residual(u: &AffineVector, v: &AffineVector, mu: &AffineCovector) -> Result<f64> {
    Ok((pair_complex(&ad_star(u, mu)?, v)? + pair_complex(mu, &bar_bracket(u, v)?)?).norm())
}

/// Largest relative error between the gradient `grad(mu)` and central
/// differences of `value` along every real coordinate direction of `mu`.
pub fn gradient_error<F, G>(value: F, grad: G, mu: &AffineCovector) -> Result<f64>
where
    F: Fn(&AffineCovector) -> Result<Complex64>,
    G: Fn(&AffineCovector) -> AffineVector,
{
    let g = grad(mu);
    let (mut err, mut norm) = (0.0f64, 0.0f64);
    for dir in AffineCovector::coordinate_directions(mu.xi.algebra(), mu.xi.band()) {
        let step = |h: f64| -> Result<Complex64> {
            let plus = value(&mu.add(&dir.scale(Complex64::new(h, 0.0)))?)?;
            let minus = value(&mu.sub(&dir.scale(Complex64::new(h, 0.0)))?)?;
            Ok((plus - minus) / (2.0 * h))
        };
        let (coarse, fine) = (step(1e-4)?, step(1e-5)?);
        let fd = fine + (fine - coarse) / 99.0;
        let an = pair_complex(&dir, &g)?;
        err = err.max((fd - an).norm());
        norm = norm.max(an.norm());
    }
    Ok(if norm > 0.0 { err / norm } else { err })
}

fn ser_complex<S: serde::Serializer>(c: &Complex64, s: S) -> std::result::Result<S::Ok, S::Error> {
    [c.re, c.im].serialize(s)
}
