//! Grid-sampled loops `g: S^1 -> G` in the matrix group of the algebra.

use std::sync::{Arc, OnceLock};

use num_complex::Complex64;

use super::grid::MatrixField;
use crate::algebra::{max_abs, GroupKind, Mat, OrthogonalAlgebra};
use crate::error::{Error, Result};
use crate::loops::LoopElement;

pub const DEFAULT_GRID: usize = 128;
/// Tolerance on `|det g|` and on the group constraints.
pub const GROUP_TOL: f64 = 1e-10;

#[derive(Debug, Clone)]
pub struct GroupLoop {
    algebra: Arc<OrthogonalAlgebra>,
    samples: Vec<Mat>,
    inverses: Vec<Mat>,
    derivative: OnceLock<Result<MatrixField>>,
}

impl GroupLoop {
    /// Wraps samples `g(x_j)`, checking the grid size, invertibility and the
    /// group constraint of the algebra's group.
    pub fn from_samples(algebra: &Arc<OrthogonalAlgebra>, samples: Vec<Mat>) -> Result<Self> {
        let m = samples.len();
        if m < 2 || !m.is_power_of_two() {
            return Err(Error::ConstraintViolation(format!("grid size {m} is not a power of two")));
        }
        let size = algebra.matrix_size();
        let mut inverses = Vec::with_capacity(m);
        for (j, g) in samples.iter().enumerate() {
            if g.shape() != (size, size) {
                return Err(Error::ConstraintViolation(format!("sample {j} has shape {:?}", g.shape())));
            }
            check_constraint(algebra.group(), g)
                .map_err(|why| Error::ConstraintViolation(format!("sample {j}: {why}")))?;
            let inv =
                g.clone().try_inverse().ok_or_else(|| Error::ConstraintViolation(format!("sample {j} is singular")))?;
            inverses.push(inv);
        }
        Ok(Self { algebra: algebra.clone(), samples, inverses, derivative: OnceLock::new() })
    }

    pub fn identity(algebra: &Arc<OrthogonalAlgebra>, m: usize) -> Result<Self> {
        let id = Mat::identity(algebra.matrix_size(), algebra.matrix_size());
        Self::from_samples(algebra, vec![id; m])
    }

    /// Constant loop at `g`.
    pub fn constant(algebra: &Arc<OrthogonalAlgebra>, g: Mat, m: usize) -> Result<Self> {
        Self::from_samples(algebra, vec![g; m])
    }

    /// Pointwise matrix exponential `x_j -> exp X(x_j)`.
    pub fn exp_loop(x: &LoopElement, m: usize) -> Result<Self> {
        Self::exp_field(x.algebra(), &MatrixField::from_loop(x, m)?)
    }

    /// Pointwise exponential of a grid field of algebra elements.
    pub fn exp_field(algebra: &Arc<OrthogonalAlgebra>, field: &MatrixField) -> Result<Self> {
        Self::from_samples(algebra, field.samples().iter().map(|a| a.clone().exp()).collect())
    }

    pub fn algebra(&self) -> &Arc<OrthogonalAlgebra> {
        &self.algebra
    }

    pub fn grid_size(&self) -> usize {
        self.samples.len()
    }

    pub fn samples(&self) -> &[Mat] {
        &self.samples
    }

    pub fn inverses(&self) -> &[Mat] {
        &self.inverses
    }

    pub fn check_grid(&self, other: &Self) -> Result<()> {
        if self.grid_size() != other.grid_size() {
            return Err(Error::GridMismatch { left: self.grid_size(), right: other.grid_size() });
        }
        if !Arc::ptr_eq(&self.algebra, &other.algebra) && self.algebra != other.algebra {
            return Err(Error::AlgebraMismatch);
        }
        Ok(())
    }

    /// Pointwise product `self * other`.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_grid(other)?;
        Self::from_samples(&self.algebra, self.samples.iter().zip(&other.samples).map(|(a, b)| a * b).collect())
    }

    /// Pointwise inverse.
    pub fn inverse(&self) -> Self {
        Self {
            algebra: self.algebra.clone(),
            samples: self.inverses.clone(),
            inverses: self.samples.clone(),
            derivative: OnceLock::new(),
        }
    }

    pub fn max_diff(&self, other: &Self) -> Result<f64> {
        self.check_grid(other)?;
        Ok(self.samples.iter().zip(&other.samples).map(|(a, b)| max_abs((a - b).as_slice())).fold(0.0, f64::max))
    }

    /// `g'` by spectral differentiation (cached).
    pub fn derivative(&self) -> Result<&MatrixField> {
        self.derivative
            .get_or_init(|| MatrixField::new(self.samples.clone()).spectral_derivative())
            .as_ref()
            .map_err(Clone::clone)
    }

    /// Maurer-Cartan fields `(g' g^{-1}, g^{-1} g')` on the grid.
    pub fn log_derivatives(&self) -> Result<(MatrixField, MatrixField)> {
        let d = self.derivative()?;
        let left = MatrixField::new(d.samples().iter().zip(&self.inverses).map(|(dg, gi)| dg * gi).collect());
        let right = MatrixField::new(self.inverses.iter().zip(d.samples()).map(|(gi, dg)| gi * dg).collect());
        Ok((left, right))
    }

    /// `g^{-1} g'` as a loop.
    pub fn right_log_derivative_loop(&self) -> Result<LoopElement> {
        self.log_derivatives()?.1.to_loop(&self.algebra)
    }

    /// `g^{-1} X g` as a loop (coadjoint transport by `g^{-1}`).
    pub fn conjugate_inverse(&self, x: &LoopElement) -> Result<LoopElement> {
        let field = MatrixField::from_loop(x, self.grid_size())?;
        MatrixField::sandwich(&self.inverses, &field, &self.samples)?.to_loop(&self.algebra)
    }

    /// `g X g^{-1}` on the grid.
    pub fn conjugate_field(&self, x: &LoopElement) -> Result<MatrixField> {
        let field = MatrixField::from_loop(x, self.grid_size())?;
        MatrixField::sandwich(&self.samples, &field, &self.inverses)
    }
}

fn check_constraint(group: GroupKind, g: &Mat) -> std::result::Result<(), String> {
    let det = g.determinant();
    let scale = 1.0 + max_abs(g.as_slice()).powi(2);
    if det.norm() < GROUP_TOL {
        return Err(format!("determinant {det} is too close to zero"));
    }
    let one = Complex64::new(1.0, 0.0);
    match group {
        GroupKind::General => Ok(()),
        GroupKind::SpecialLinear => {
            if (det - one).norm() > GROUP_TOL * scale {
                Err(format!("det = {det}, expected 1"))
            } else {
                Ok(())
            }
        }
        GroupKind::SpecialOrthogonal => {
            let n = g.nrows();
            let gram = g.transpose() * g;
            let err = max_abs((gram - Mat::identity(n, n)).as_slice());
            if err > GROUP_TOL * scale {
                Err(format!("|g^T g - 1| = {err:e}"))
            } else if (det - one).norm() > GROUP_TOL * scale {
                Err(format!("det = {det}, expected 1"))
            } else {
                Ok(())
            }
        }
    }
}
