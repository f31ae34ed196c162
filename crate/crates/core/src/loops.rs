//! The loop algebra of smooth maps `S^1 -> g`, realized as trigonometric
//! polynomials `X(x) = sum_{|n| <= N} X_n e^{inx}` with coefficients in the
//! basis of the parent [`OrthogonalAlgebra`].
//!
//! Brackets are exact Fourier convolutions: the band grows and nothing is
//! truncated unless the caller asks for it with [`LoopElement::truncate`].

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::algebra::{max_abs, AlgebraElement, OrthogonalAlgebra};
use crate::error::{Error, Result};
use crate::mutation::{factor, Site};
use crate::spectral;

/// Fourier modes below this magnitude are dropped by [`LoopElement::from_grid`].
pub const GRID_MODE_CUTOFF: f64 = 1e-13;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

#[derive(Debug, Clone)]
pub struct LoopElement {
    algebra: Arc<OrthogonalAlgebra>,
    band: usize,
    /// mode `n` occupies `coeffs[(n + band) * d .. (n + band + 1) * d]`
    coeffs: Vec<Complex64>,
}

impl LoopElement {
    pub fn zero(algebra: &Arc<OrthogonalAlgebra>) -> Self {
        Self::zeros(algebra, 0)
    }

    /// The zero loop padded to `band`.
    pub fn zeros(algebra: &Arc<OrthogonalAlgebra>, band: usize) -> Self {
        let d = algebra.dim();
        Self { algebra: algebra.clone(), band, coeffs: vec![ZERO; (2 * band + 1) * d] }
    }

    pub fn constant(algebra: &Arc<OrthogonalAlgebra>, x: &AlgebraElement) -> Result<Self> {
        Self::monomial(algebra, 0, x)
    }

    /// `x e^{inx}`
    pub fn monomial(algebra: &Arc<OrthogonalAlgebra>, n: i64, x: &AlgebraElement) -> Result<Self> {
        Self::from_modes(algebra, [(n, x.clone())])
    }

    /// Builds a loop from `(mode, coefficient)` pairs; repeated modes add.
    pub fn from_modes(
        algebra: &Arc<OrthogonalAlgebra>,
        modes: impl IntoIterator<Item = (i64, AlgebraElement)>,
    ) -> Result<Self> {
        let modes: Vec<_> = modes.into_iter().collect();
        let band = modes.iter().map(|(n, _)| n.unsigned_abs() as usize).max().unwrap_or(0);
        let mut out = Self::zeros(algebra, band);
        for (n, x) in modes {
            algebra.check(&x)?;
            for (slot, c) in out.mode_mut(n).iter_mut().zip(&x.coeffs) {
                *slot += c;
            }
        }
        Ok(out)
    }

    pub fn algebra(&self) -> &Arc<OrthogonalAlgebra> {
        &self.algebra
    }

    pub fn band(&self) -> usize {
        self.band
    }

    pub fn dim(&self) -> usize {
        self.algebra.dim()
    }

    /// Coefficient slice of mode `n`, or `None` outside the band.
    pub fn mode(&self, n: i64) -> Option<&[Complex64]> {
        if n.unsigned_abs() as usize > self.band {
            return None;
        }
        let d = self.dim();
        let at = (n + self.band as i64) as usize * d;
        Some(&self.coeffs[at..at + d])
    }

    /// Coefficient of mode `n` (zero outside the band).
    pub fn mode_element(&self, n: i64) -> AlgebraElement {
        match self.mode(n) {
            Some(c) => AlgebraElement::new(c.to_vec()),
            None => self.algebra.zero(),
        }
    }

    fn mode_mut(&mut self, n: i64) -> &mut [Complex64] {
        let d = self.dim();
        let at = (n + self.band as i64) as usize * d;
        &mut self.coeffs[at..at + d]
    }

    /// Raw coefficients, mode-major from `-band` to `band`.
    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn modes(&self) -> impl Iterator<Item = (i64, &[Complex64])> {
        let b = self.band as i64;
        self.coeffs.chunks(self.dim()).enumerate().map(move |(i, c)| (i as i64 - b, c))
    }

    pub fn same_algebra(&self, other: &Self) -> Result<()> {
        if Arc::ptr_eq(&self.algebra, &other.algebra) || self.algebra == other.algebra {
            Ok(())
        } else {
            Err(Error::AlgebraMismatch)
        }
    }

    /// Zero-pads to `band` (no-op if already at least that wide).
    pub fn padded(&self, band: usize) -> Self {
        if band <= self.band {
            return self.clone();
        }
        let mut out = Self::zeros(&self.algebra, band);
        for (n, c) in self.modes() {
            out.mode_mut(n).copy_from_slice(c);
        }
        out
    }

    /// Drops every mode with `|n| > band`. Lossy.
    pub fn truncate(&self, band: usize) -> Self {
        if band >= self.band {
            return self.clone();
        }
        let mut out = Self::zeros(&self.algebra, band);
        for n in -(band as i64)..=band as i64 {
            out.mode_mut(n).copy_from_slice(self.mode(n).unwrap());
        }
        out
    }

    /// Same loop with outer all-zero modes removed.
    pub fn trimmed(&self) -> Self {
        let mut band = self.band;
        while band > 0 {
            let b = band as i64;
            let zero = |n| self.mode(n).unwrap().iter().all(|c| *c == ZERO);
            if zero(b) && zero(-b) {
                band -= 1;
            } else {
                break;
            }
        }
        self.truncate(band)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.combine(other, Complex64::new(1.0, 0.0))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.combine(other, Complex64::new(-1.0, 0.0))
    }

    /// `self + s * other`
    pub fn add_scaled(&self, other: &Self, s: Complex64) -> Result<Self> {
        self.combine(other, s)
    }

    fn combine(&self, other: &Self, s: Complex64) -> Result<Self> {
        self.same_algebra(other)?;
        let mut out = self.padded(other.band);
        for (n, c) in other.modes() {
            for (slot, v) in out.mode_mut(n).iter_mut().zip(c) {
                *slot += s * v;
            }
        }
        Ok(out)
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self { algebra: self.algebra.clone(), band: self.band, coeffs: self.coeffs.iter().map(|c| c * s).collect() }
    }

    pub fn neg(&self) -> Self {
        self.scale(Complex64::new(-1.0, 0.0))
    }

    /// Max norm over all Fourier coefficients.
    pub fn max_norm(&self) -> f64 {
        max_abs(&self.coeffs)
    }

    /// Max-norm distance to `other` (bands may differ).
    pub fn max_diff(&self, other: &Self) -> Result<f64> {
        Ok(self.sub(other)?.max_norm())
    }

    /// Pointwise bracket `[X(x), Y(x)]` as an exact convolution of modes.
    pub fn bracket(&self, other: &Self) -> Result<Self> {
        self.same_algebra(other)?;
        let d = self.dim();
        let band = self.band + other.band;
        let mut out = Self::zeros(&self.algebra, band);
        let one = Complex64::new(1.0, 0.0);
        for (p, x) in self.modes() {
            if x.iter().all(|c| *c == ZERO) {
                continue;
            }
            for (q, y) in other.modes() {
                if y.iter().all(|c| *c == ZERO) {
                    continue;
                }
                let at = (p + q + band as i64) as usize * d;
                self.algebra.bracket_acc(x, y, one, &mut out.coeffs[at..at + d]);
            }
        }
        Ok(out)
    }

    /// `X'`: mode `n` is multiplied by `i n`.
    pub fn derivative(&self) -> Self {
        let s = factor(Site::LoopDerivative);
        let mut out = self.clone();
        let band = self.band as i64;
        let d = self.dim();
        for (i, chunk) in out.coeffs.chunks_mut(d).enumerate() {
            let n = i as i64 - band;
            let m = Complex64::new(0.0, s * n as f64);
            chunk.iter_mut().for_each(|c| *c *= m);
        }
        out
    }

    /// `int_0^{2pi} (self(x), X(x)) dx = 2 pi sum_n (self_{-n}, X_n)`,
    /// complex-bilinear.
    pub fn pair(&self, other: &Self) -> Result<Complex64> {
        self.same_algebra(other)?;
        let b = self.band.min(other.band) as i64;
        let mut acc = ZERO;
        for n in -b..=b {
            acc += self.algebra.inner_raw(self.mode(-n).unwrap(), other.mode(n).unwrap());
        }
        Ok(2.0 * PI * acc)
    }

    /// The central cocycle `int_0^{2pi} (self(y), Y'(y)) dy`.
    pub fn central_cocycle(&self, other: &Self) -> Result<Complex64> {
        Ok(factor(Site::Cocycle) * self.pair(&other.derivative())?)
    }

    /// Samples `X(x_j)` on the `m`-point grid. Requires `m > 2 band`.
    pub fn to_grid(&self, m: usize) -> Result<Vec<AlgebraElement>> {
        Ok(self.to_grid_coords(m)?.into_iter().map(AlgebraElement::new).collect())
    }

    pub(crate) fn to_grid_coords(&self, m: usize) -> Result<Vec<Vec<Complex64>>> {
        if m <= 2 * self.band {
            return Err(Error::AliasRisk { band: self.band, grid: m });
        }
        let d = self.dim();
        let mut out = vec![vec![ZERO; d]; m];
        let mut buf = vec![ZERO; m];
        for i in 0..d {
            buf.iter_mut().for_each(|b| *b = ZERO);
            for (n, c) in self.modes() {
                buf[spectral::mode_bin(n, m)] = c[i];
            }
            spectral::inverse(&mut buf);
            for (j, v) in buf.iter().enumerate() {
                out[j][i] = *v;
            }
        }
        Ok(out)
    }

    /// Discrete Fourier transform of samples on `x_j = 2 pi j / M`. Returns
    /// band `floor((M-1)/2)`; modes smaller than [`GRID_MODE_CUTOFF`] are
    /// zeroed.
    pub fn from_grid(algebra: &Arc<OrthogonalAlgebra>, samples: &[AlgebraElement]) -> Result<Self> {
        for s in samples {
            algebra.check(s)?;
        }
        let coords: Vec<&[Complex64]> = samples.iter().map(|s| s.coeffs.as_slice()).collect();
        Self::from_grid_coords(algebra, &coords)
    }

    pub(crate) fn from_grid_coords(algebra: &Arc<OrthogonalAlgebra>, samples: &[&[Complex64]]) -> Result<Self> {
        let m = samples.len();
        if m == 0 {
            return Err(Error::AliasRisk { band: 0, grid: 0 });
        }
        let d = algebra.dim();
        let band = (m - 1) / 2;
        let mut out = Self::zeros(algebra, band);
        let mut buf = vec![ZERO; m];
        for i in 0..d {
            for (b, s) in buf.iter_mut().zip(samples) {
                *b = s[i];
            }
            spectral::forward(&mut buf);
            for n in -(band as i64)..=band as i64 {
                out.mode_mut(n)[i] = buf[spectral::mode_bin(n, m)] / m as f64;
            }
        }
        for chunk in out.coeffs.chunks_mut(d) {
            if max_abs(chunk) < GRID_MODE_CUTOFF {
                chunk.iter_mut().for_each(|c| *c = ZERO);
            }
        }
        Ok(out)
    }

    /// JSON form: `{"algebra": name, "band": N, "modes": {"n": [[re, im], ...]}}`.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(LoopJson::from(self)).expect("loop serializes")
    }

    pub fn from_json(algebra: &Arc<OrthogonalAlgebra>, value: &serde_json::Value) -> Result<Self> {
        let parsed: LoopJson = serde_json::from_value(value.clone())?;
        if parsed.algebra != algebra.name() {
            return Err(Error::AlgebraMismatch);
        }
        let modes = parsed
            .modes
            .into_iter()
            .map(|(n, c)| (n, AlgebraElement::new(c.iter().map(|p| Complex64::new(p[0], p[1])).collect())))
            .collect::<Vec<_>>();
        Ok(Self::from_modes(algebra, modes)?.padded(parsed.band))
    }
}

#[derive(Serialize, Deserialize)]
struct LoopJson {
    algebra: String,
    band: usize,
    modes: BTreeMap<i64, Vec<[f64; 2]>>,
}

impl From<&LoopElement> for LoopJson {
    fn from(x: &LoopElement) -> Self {
        LoopJson {
            algebra: x.algebra.name().to_owned(),
            band: x.band,
            modes: x
                .modes()
                .filter(|(_, c)| c.iter().any(|v| *v != ZERO))
                .map(|(n, c)| (n, c.iter().map(|v| [v.re, v.im]).collect()))
                .collect(),
        }
    }
}

impl Serialize for LoopElement {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        LoopJson::from(self).serialize(s)
    }
}
