//! Matrix-valued fields sampled on the uniform grid `x_j = 2 pi j / M`.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;

use crate::algebra::{max_abs, Mat, OrthogonalAlgebra};
use crate::error::{Error, Result};
use crate::loops::LoopElement;
use crate::mutation::{factor, Site};
use crate::spectral;

/// Relative spectral energy allowed in the outer quarter of the resolvable
/// band before a field is considered aliased.
pub const ALIAS_TAIL_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct MatrixField {
    samples: Vec<Mat>,
}

impl MatrixField {
    pub fn new(samples: Vec<Mat>) -> Self {
        Self { samples }
    }

    /// Matrix realization of `x` sampled on `m` points.
    pub fn from_loop(x: &LoopElement, m: usize) -> Result<Self> {
        let alg = x.algebra();
        Ok(Self::new(x.to_grid_coords(m)?.iter().map(|c| alg.to_matrix(c)).collect()))
    }

    /// Projects every sample onto the algebra and transforms back to Fourier
    /// modes. Outer modes that vanish are trimmed.
    pub fn to_loop(&self, algebra: &Arc<OrthogonalAlgebra>) -> Result<LoopElement> {
        let coords: Vec<Vec<Complex64>> = self.samples.iter().map(|s| algebra.coords_of(s)).collect();
        let refs: Vec<&[Complex64]> = coords.iter().map(|c| c.as_slice()).collect();
        Ok(LoopElement::from_grid_coords(algebra, &refs)?.trimmed())
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn samples(&self) -> &[Mat] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<Mat> {
        self.samples
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.len() == other.len() {
            Ok(())
        } else {
            Err(Error::GridMismatch { left: self.len(), right: other.len() })
        }
    }

    /// Pointwise product.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(Self::new(self.samples.iter().zip(&other.samples).map(|(a, b)| a * b).collect()))
    }

    /// Pointwise `a x b`.
    pub fn sandwich(a: &[Mat], x: &Self, b: &[Mat]) -> Result<Self> {
        if a.len() != x.len() || b.len() != x.len() {
            return Err(Error::GridMismatch { left: a.len(), right: x.len() });
        }
        Ok(Self::new(a.iter().zip(&x.samples).zip(b).map(|((a, x), b)| a * x * b).collect()))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(Self::new(self.samples.iter().zip(&other.samples).map(|(a, b)| a + b).collect()))
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self::new(self.samples.iter().map(|a| a * s).collect())
    }

    pub fn max_diff(&self, other: &Self) -> Result<f64> {
        self.check(other)?;
        Ok(self.samples.iter().zip(&other.samples).map(|(a, b)| max_abs((a - b).as_slice())).fold(0.0, f64::max))
    }

    pub fn max_norm(&self) -> f64 {
        self.samples.iter().map(|a| max_abs(a.as_slice())).fold(0.0, f64::max)
    }

    /// Rectangle-rule quadrature of the trace form:
    /// `(2 pi / M) sum_j tr(a_j b_j)`.
    pub fn quadrature(&self, other: &Self) -> Result<Complex64> {
        self.check(other)?;
        let sum: Complex64 = self.samples.iter().zip(&other.samples).map(|(a, b)| (a * b).trace()).sum();
        Ok(sum * (2.0 * PI / self.len() as f64))
    }

    /// Entrywise spectral derivative (FFT, multiply mode `n` by `i n`,
    /// inverse FFT). The Nyquist bin is dropped.
    ///
    /// Fails with [`Error::AliasWarning`] when the relative spectral energy
    /// in modes `|n| > 3M/8` exceeds [`ALIAS_TAIL_TOL`].
    pub fn spectral_derivative(&self) -> Result<Self> {
        let m = self.len();
        if m == 0 {
            return Ok(self.clone());
        }
        let (rows, cols) = self.samples[0].shape();
        let s = factor(Site::SpectralDerivative);
        let mut out = vec![Mat::zeros(rows, cols); m];
        let mut buf = vec![Complex64::new(0.0, 0.0); m];
        let (mut total, mut tail) = (0.0, 0.0);
        let cutoff = 3 * m / 8;
        for r in 0..rows {
            for c in 0..cols {
                for (b, sample) in buf.iter_mut().zip(&self.samples) {
                    *b = sample[(r, c)];
                }
                spectral::forward(&mut buf);
                for (k, b) in buf.iter_mut().enumerate() {
                    let energy = b.norm_sqr();
                    total += energy;
                    match spectral::bin_mode(k, m) {
                        Some(n) => {
                            if n.unsigned_abs() as usize > cutoff {
                                tail += energy;
                            }
                            *b *= Complex64::new(0.0, s * n as f64 / m as f64);
                        }
                        None => {
                            tail += energy;
                            *b = Complex64::new(0.0, 0.0);
                        }
                    }
                }
                spectral::inverse(&mut buf);
                for (o, b) in out.iter_mut().zip(&buf) {
                    o[(r, c)] = *b;
                }
            }
        }
        if total > 0.0 && tail / total > ALIAS_TAIL_TOL {
            return Err(Error::AliasWarning { tail_energy: tail / total });
        }
        Ok(Self::new(out))
    }
}
