//! Finite-dimensional complex orthogonal Lie algebras.
//!
//! An [`OrthogonalAlgebra`] is given by a basis of `m x m` complex matrices.
//! Structure constants are extracted by least squares, and the invariant
//! form is the trace form `(X, Y) = tr(XY)`, so coadjoint transport on the
//! loop level is plain matrix conjugation.

use std::path::Path;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Mat = DMatrix<Complex64>;

/// Closure and reconstruction tolerance for `from_matrices`.
pub const CLOSURE_TOL: f64 = 1e-10;
/// Minimum singular-value ratio of the trace form.
pub const FORM_CONDITION_TOL: f64 = 1e-10;
/// Minimum singular-value ratio of the Frobenius Gram matrix.
pub const INDEPENDENCE_TOL: f64 = 1e-12;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Group whose Lie algebra this is; decides which constraint group loops
/// must satisfy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GroupKind {
    /// `det g = 1`
    SpecialLinear,
    /// `g^T g = 1` and `det g = 1`
    SpecialOrthogonal,
    /// invertibility only
    General,
}

/// Coordinates of an element of `g` in the algebra's basis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlgebraElement {
    pub coeffs: Vec<Complex64>,
}

impl AlgebraElement {
    pub fn new(coeffs: Vec<Complex64>) -> Self {
        Self { coeffs }
    }

    pub fn zero(dim: usize) -> Self {
        Self { coeffs: vec![ZERO; dim] }
    }

    /// The `i`-th basis vector.
    pub fn basis(dim: usize, i: usize) -> Self {
        let mut coeffs = vec![ZERO; dim];
        coeffs[i] = Complex64::new(1.0, 0.0);
        Self { coeffs }
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self { coeffs: self.coeffs.iter().map(|c| c * s).collect() }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        check_len(self.dim(), other.dim())?;
        Ok(Self { coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect() })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        check_len(self.dim(), other.dim())?;
        Ok(Self { coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect() })
    }

    /// Max norm over coefficients.
    pub fn max_norm(&self) -> f64 {
        max_abs(&self.coeffs)
    }
}

/// A finite-dimensional complex Lie algebra with a nondegenerate
/// ad-invariant symmetric form, realized by matrices.
#[derive(Debug, Clone, PartialEq)]
pub struct OrthogonalAlgebra {
    name: String,
    group: GroupKind,
    basis: Vec<Mat>,
    /// `c[(i*d + j)*d + k]` with `[b_i, b_j] = sum_k c_ij^k b_k`
    structure: Vec<Complex64>,
    /// nonzero entries of `structure` as `(i, j, k, c)`
    sparse: Vec<(usize, usize, usize, Complex64)>,
    form: Mat,
    gram_inv: Mat,
}

impl OrthogonalAlgebra {
    /// Builds an algebra from basis matrices, computing structure constants
    /// and the trace form and verifying every algebra invariant.
    pub fn from_matrices(name: impl Into<String>, mats: Vec<Mat>, group: GroupKind) -> Result<Self> {
        let d = mats.len();
        if d == 0 {
            return Err(Error::InvalidBasis("empty basis".into()));
        }
        let m = mats[0].nrows();
        if m == 0 || mats.iter().any(|b| b.nrows() != m || b.ncols() != m) {
            return Err(Error::InvalidBasis("basis matrices must be square and of equal size".into()));
        }

        let gram = Mat::from_fn(d, d, |i, j| frobenius(&mats[i], &mats[j]));
        let ratio = condition_ratio(&gram);
        if ratio < INDEPENDENCE_TOL {
            return Err(Error::LinearlyDependent { ratio });
        }
        let gram_inv = gram.try_inverse().ok_or(Error::LinearlyDependent { ratio: 0.0 })?;

        let mut alg = Self {
            name: name.into(),
            group,
            basis: mats,
            structure: vec![ZERO; d * d * d],
            sparse: Vec::new(),
            form: Mat::zeros(d, d),
            gram_inv,
        };

        for i in 0..d {
            for j in 0..d {
                let comm = commutator(&alg.basis[i], &alg.basis[j]);
                let coords = alg.coords_of(&comm);
                let residual = max_abs((alg.to_matrix(&coords) - &comm).as_slice());
                if residual > CLOSURE_TOL * (1.0 + max_abs(comm.as_slice())) {
                    return Err(Error::NotClosed { i, j, residual });
                }
                for (k, c) in coords.into_iter().enumerate() {
                    alg.structure[(i * d + j) * d + k] = c;
                }
            }
        }

        alg.form = Mat::from_fn(d, d, |i, j| (&alg.basis[i] * &alg.basis[j]).trace());
        let ratio = condition_ratio(&alg.form);
        if ratio < FORM_CONDITION_TOL {
            return Err(Error::DegenerateForm { ratio });
        }
        alg.rebuild_sparse();
        alg.verify(CLOSURE_TOL)?;
        Ok(alg)
    }

    /// `sl(2, C)` with basis `(e, f, h)` and the trace form.
    pub fn sl2() -> Self {
        let e = unit(2, 0, 1);
        let f = unit(2, 1, 0);
        let h = Mat::from_row_slice(2, 2, &[c(1.0), ZERO, ZERO, c(-1.0)]);
        Self::from_matrices("sl2", vec![e, f, h], GroupKind::SpecialLinear).expect("sl2 basis is valid")
    }

    /// `so(3, C)` with the rotation generators `L_1, L_2, L_3`,
    /// `[L_1, L_2] = L_3` cyclically, and the trace form.
    pub fn so3() -> Self {
        let gen = |a: usize, b: usize| {
            let mut m = Mat::zeros(3, 3);
            m[(a, b)] = c(-1.0);
            m[(b, a)] = c(1.0);
            m
        };
        Self::from_matrices("so3", vec![gen(1, 2), gen(2, 0), gen(0, 1)], GroupKind::SpecialOrthogonal)
            .expect("so3 basis is valid")
    }

    /// Built-in algebra by name (`sl2`, `so3`).
    pub fn by_name(name: &str) -> Result<Self> {
        match name {
            "sl2" => Ok(Self::sl2()),
            "so3" => Ok(Self::so3()),
            other => Err(Error::UnknownAlgebra(other.to_owned())),
        }
    }

    /// Parses the JSON basis format: an object with `basis`, a list of
    /// matrices given as nested arrays of `[re, im]` pairs, plus optional
    /// `name` and `group`.
    pub fn from_json_str(s: &str) -> Result<Self> {
        let file: AlgebraFile = serde_json::from_str(s)?;
        let mats = file
            .basis
            .iter()
            .map(|rows| {
                let n = rows.len();
                if rows.iter().any(|r| r.len() != n) {
                    return Err(Error::InvalidBasis("basis matrix is not square".into()));
                }
                Ok(Mat::from_fn(n, n, |i, j| Complex64::new(rows[i][j][0], rows[i][j][1])))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_matrices(
            file.name.unwrap_or_else(|| "custom".into()),
            mats,
            file.group.unwrap_or(GroupKind::General),
        )
    }

    pub fn from_json_file(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json_str(&std::fs::read_to_string(path)?)
    }

    /// Serializes the basis in the format read by [`Self::from_json_str`].
    pub fn to_json_string(&self) -> String {
        let file = AlgebraFile {
            name: Some(self.name.clone()),
            group: Some(self.group),
            basis: self
                .basis
                .iter()
                .map(|b| {
                    (0..b.nrows()).map(|i| (0..b.ncols()).map(|j| [b[(i, j)].re, b[(i, j)].im]).collect()).collect()
                })
                .collect(),
        };
        serde_json::to_string_pretty(&file).expect("algebra file serializes")
    }

    /// A copy with `c_ij^k` shifted by `delta`, skipping all invariant
    /// checks. Used by fault-injection runs only.
    pub fn with_corrupted_constant(&self, i: usize, j: usize, k: usize, delta: Complex64) -> Self {
        let mut out = self.clone();
        let d = self.dim();
        out.structure[(i * d + j) * d + k] += delta;
        out.rebuild_sparse();
        out
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn group(&self) -> GroupKind {
        self.group
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Size `m` of the realizing matrices.
    pub fn matrix_size(&self) -> usize {
        self.basis[0].nrows()
    }

    pub fn basis_matrices(&self) -> &[Mat] {
        &self.basis
    }

    pub fn structure_constant(&self, i: usize, j: usize, k: usize) -> Complex64 {
        let d = self.dim();
        self.structure[(i * d + j) * d + k]
    }

    /// The form matrix `B_ij = (b_i, b_j)`.
    pub fn form(&self) -> &Mat {
        &self.form
    }

    pub fn zero(&self) -> AlgebraElement {
        AlgebraElement::zero(self.dim())
    }

    pub fn basis_element(&self, i: usize) -> AlgebraElement {
        AlgebraElement::basis(self.dim(), i)
    }

    pub fn bracket(&self, x: &AlgebraElement, y: &AlgebraElement) -> Result<AlgebraElement> {
        self.check(x)?;
        self.check(y)?;
        let mut out = vec![ZERO; self.dim()];
        self.bracket_acc(&x.coeffs, &y.coeffs, Complex64::new(1.0, 0.0), &mut out);
        Ok(AlgebraElement::new(out))
    }

    pub fn inner(&self, x: &AlgebraElement, y: &AlgebraElement) -> Result<Complex64> {
        self.check(x)?;
        self.check(y)?;
        Ok(self.inner_raw(&x.coeffs, &y.coeffs))
    }

    /// `out += scale * [x, y]` on raw coordinate slices.
    #[inline]
    pub(crate) fn bracket_acc(&self, x: &[Complex64], y: &[Complex64], scale: Complex64, out: &mut [Complex64]) {
        for &(i, j, k, c) in &self.sparse {
            out[k] += scale * c * x[i] * y[j];
        }
    }

    #[inline]
    pub(crate) fn inner_raw(&self, x: &[Complex64], y: &[Complex64]) -> Complex64 {
        let mut acc = ZERO;
        for (i, &xi) in x.iter().enumerate() {
            if xi == ZERO {
                continue;
            }
            let row: Complex64 = y.iter().enumerate().map(|(j, &yj)| self.form[(i, j)] * yj).sum();
            acc += xi * row;
        }
        acc
    }

    /// Matrix realization `sum_i x_i b_i`.
    pub fn to_matrix(&self, coeffs: &[Complex64]) -> Mat {
        let m = self.matrix_size();
        let mut out = Mat::zeros(m, m);
        for (x, b) in coeffs.iter().zip(&self.basis) {
            if *x != ZERO {
                out += b * *x;
            }
        }
        out
    }

    pub fn element_matrix(&self, x: &AlgebraElement) -> Result<Mat> {
        self.check(x)?;
        Ok(self.to_matrix(&x.coeffs))
    }

    /// Least-squares coordinates of a matrix in the basis (exact for
    /// matrices in the span).
    pub fn coords_of(&self, m: &Mat) -> Vec<Complex64> {
        let d = self.dim();
        let rhs = nalgebra::DVector::from_iterator(d, self.basis.iter().map(|b| frobenius(b, m)));
        (&self.gram_inv * rhs).iter().copied().collect()
    }

    pub fn element_of(&self, m: &Mat) -> AlgebraElement {
        AlgebraElement::new(self.coords_of(m))
    }

    /// `|(x, [y, z]) - ([x, y], z)|`
    pub fn ad_invariance_residual(&self, x: &AlgebraElement, y: &AlgebraElement, z: &AlgebraElement) -> Result<f64> {
        let lhs = self.inner(x, &self.bracket(y, z)?)?;
        let rhs = self.inner(&self.bracket(x, y)?, z)?;
        Ok((lhs - rhs).norm())
    }

    /// Max-norm of `[x,[y,z]] + [y,[z,x]] + [z,[x,y]]`.
    pub fn jacobi_residual(&self, x: &AlgebraElement, y: &AlgebraElement, z: &AlgebraElement) -> Result<f64> {
        let a = self.bracket(x, &self.bracket(y, z)?)?;
        let b = self.bracket(y, &self.bracket(z, x)?)?;
        let c = self.bracket(z, &self.bracket(x, y)?)?;
        Ok(a.add(&b)?.add(&c)?.max_norm())
    }

    /// Max-norm gap between the coordinate bracket and the matrix commutator.
    pub fn realization_residual(&self, x: &AlgebraElement, y: &AlgebraElement) -> Result<f64> {
        let coord = self.to_matrix(&self.bracket(x, y)?.coeffs);
        let comm = commutator(&self.element_matrix(x)?, &self.element_matrix(y)?);
        Ok(max_abs((coord - comm).as_slice()))
    }

    /// Checks every structural invariant on the basis at tolerance `tol`
    /// (relative to the size of the constants involved).
    pub fn verify(&self, tol: f64) -> Result<()> {
        let d = self.dim();
        let scale = 1.0 + max_abs(&self.structure).max(max_abs(self.form.as_slice()));
        let tol = tol * scale * scale;
        for i in 0..d {
            for j in 0..d {
                if (self.form[(i, j)] - self.form[(j, i)]).norm() > tol {
                    return Err(Error::InvariantViolation(format!("form not symmetric at ({i},{j})")));
                }
                let tr = (&self.basis[i] * &self.basis[j]).trace();
                if (tr - self.form[(i, j)]).norm() > tol {
                    return Err(Error::InvariantViolation(format!("form differs from trace form at ({i},{j})")));
                }
                for k in 0..d {
                    let s = self.structure_constant(i, j, k) + self.structure_constant(j, i, k);
                    if s.norm() > tol {
                        return Err(Error::InvariantViolation(format!(
                            "structure constants not antisymmetric at ({i},{j},{k})"
                        )));
                    }
                }
            }
        }
        if condition_ratio(&self.form) < FORM_CONDITION_TOL {
            return Err(Error::DegenerateForm { ratio: condition_ratio(&self.form) });
        }
        for i in 0..d {
            let bi = self.basis_element(i);
            for j in 0..d {
                let bj = self.basis_element(j);
                if self.realization_residual(&bi, &bj)? > tol {
                    return Err(Error::InvariantViolation(format!(
                        "structure constants disagree with matrix commutator at ({i},{j})"
                    )));
                }
                for k in 0..d {
                    let bk = self.basis_element(k);
                    if self.jacobi_residual(&bi, &bj, &bk)? > tol {
                        return Err(Error::InvariantViolation(format!("Jacobi fails at ({i},{j},{k})")));
                    }
                    if self.ad_invariance_residual(&bi, &bj, &bk)? > tol {
                        return Err(Error::InvariantViolation(format!("form not ad-invariant at ({i},{j},{k})")));
                    }
                }
            }
        }
        Ok(())
    }

    fn rebuild_sparse(&mut self) {
        let d = self.dim();
        self.sparse = (0..d)
            .flat_map(|i| (0..d).flat_map(move |j| (0..d).map(move |k| (i, j, k))))
            .filter_map(|(i, j, k)| {
                let v = self.structure[(i * d + j) * d + k];
                (v != ZERO).then_some((i, j, k, v))
            })
            .collect();
    }

    pub(crate) fn check(&self, x: &AlgebraElement) -> Result<()> {
        check_len(self.dim(), x.dim())
    }
}

#[derive(Serialize, Deserialize)]
struct AlgebraFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    group: Option<GroupKind>,
    basis: Vec<Vec<Vec<[f64; 2]>>>,
}

pub fn commutator(a: &Mat, b: &Mat) -> Mat {
    a * b - b * a
}

/// `tr(a^H b)`
fn frobenius(a: &Mat, b: &Mat) -> Complex64 {
    a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y).sum()
}

/// Smallest over largest singular value; 0 for the zero matrix.
pub fn condition_ratio(m: &Mat) -> f64 {
    let sv = m.clone().svd(false, false).singular_values;
    let max = sv.iter().cloned().fold(0.0, f64::max);
    let min = sv.iter().cloned().fold(f64::INFINITY, f64::min);
    if max == 0.0 {
        0.0
    } else {
        min / max
    }
}

pub(crate) fn max_abs(xs: &[Complex64]) -> f64 {
    xs.iter().map(|x| x.norm()).fold(0.0, f64::max)
}

fn check_len(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// Matrix unit `E_{r,col}` of size `n`.
fn unit(n: usize, r: usize, col: usize) -> Mat {
    let mut m = Mat::zeros(n, n);
    m[(r, col)] = c(1.0);
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    fn el(v: &[f64]) -> AlgebraElement {
        AlgebraElement::new(v.iter().map(|&x| c(x)).collect())
    }

    fn commutator_coords(alg: &OrthogonalAlgebra, x: &AlgebraElement, y: &AlgebraElement) -> Vec<Complex64> {
        let mx = alg.to_matrix(&x.coeffs);
        let my = alg.to_matrix(&y.coeffs);
        alg.coords_of(&(&mx * &my - &my * &mx))
    }

    #[test]
    fn sl2_brackets_match_commutators() {
        let alg = OrthogonalAlgebra::sl2();
        let (e, f, h) = (alg.basis_element(0), alg.basis_element(1), alg.basis_element(2));
        // oracle: matrix commutator of the realizing matrices
        let ef = commutator_coords(&alg, &e, &f);
        let he = commutator_coords(&alg, &h, &e);
        assert_eq!(ef, h.coeffs);
        assert_eq!(he, e.scale(c(2.0)).coeffs);
        assert_eq!(alg.bracket(&e, &f).unwrap().coeffs, ef);
        assert_eq!(alg.bracket(&h, &e).unwrap().coeffs, he);
        let x = el(&[0.3, -1.2, 0.7]);
        assert_eq!(alg.bracket(&x, &x).unwrap().max_norm(), 0.0);
    }

    #[test]
    fn sl2_trace_form() {
        let alg = OrthogonalAlgebra::sl2();
        let (e, f, h) = (alg.basis_element(0), alg.basis_element(1), alg.basis_element(2));
        let tr = |a: &AlgebraElement, b: &AlgebraElement| (alg.to_matrix(&a.coeffs) * alg.to_matrix(&b.coeffs)).trace();
        assert_eq!(tr(&h, &h), c(2.0));
        assert_eq!(tr(&e, &f), c(1.0));
        assert_eq!(alg.inner(&h, &h).unwrap(), c(2.0));
        assert_eq!(alg.inner(&e, &f).unwrap(), c(1.0));
        assert_eq!(alg.inner(&el(&[1.0, 2.0, 3.0]), &alg.zero()).unwrap(), ZERO);
    }

    #[test]
    fn so3_is_valid() {
        let alg = OrthogonalAlgebra::so3();
        assert_eq!(alg.dim(), 3);
        assert_eq!(alg.structure_constant(0, 1, 2), c(1.0));
        assert_eq!(alg.structure_constant(1, 0, 2), c(-1.0));
        assert_eq!(alg.form()[(0, 0)], c(-2.0));
        alg.verify(1e-12).unwrap();
    }

    #[test]
    fn abelian_single_generator() {
        let h = Mat::from_row_slice(2, 2, &[c(1.0), ZERO, ZERO, c(-1.0)]);
        let alg = OrthogonalAlgebra::from_matrices("t", vec![h], GroupKind::General).unwrap();
        assert_eq!(alg.dim(), 1);
        assert_eq!(alg.structure_constant(0, 0, 0), ZERO);
        assert_eq!(alg.form()[(0, 0)], c(2.0));
    }

    #[test]
    fn borel_form_is_degenerate() {
        let sl2 = OrthogonalAlgebra::sl2();
        let e = sl2.basis_matrices()[0].clone();
        let h = sl2.basis_matrices()[2].clone();
        let err = OrthogonalAlgebra::from_matrices("b", vec![e, h], GroupKind::General).unwrap_err();
        assert!(matches!(err, Error::DegenerateForm { .. }), "{err:?}");
    }

    #[test]
    fn non_closed_basis_rejected() {
        let sl2 = OrthogonalAlgebra::sl2();
        let e = sl2.basis_matrices()[0].clone();
        let f = sl2.basis_matrices()[1].clone();
        let err = OrthogonalAlgebra::from_matrices("ef", vec![e, f], GroupKind::General).unwrap_err();
        assert!(matches!(err, Error::NotClosed { .. }), "{err:?}");
    }

    #[test]
    fn dependent_basis_rejected() {
        let sl2 = OrthogonalAlgebra::sl2();
        let h = sl2.basis_matrices()[2].clone();
        let err = OrthogonalAlgebra::from_matrices("hh", vec![h.clone(), h * c(2.0)], GroupKind::General).unwrap_err();
        assert!(matches!(err, Error::LinearlyDependent { .. }), "{err:?}");
    }

    #[test]
    fn dimension_mismatch() {
        let alg = OrthogonalAlgebra::sl2();
        let err = alg.bracket(&el(&[1.0, 0.0]), &alg.basis_element(0)).unwrap_err();
        assert_eq!(err, Error::DimensionMismatch { expected: 3, found: 2 });
        assert!(alg.inner(&alg.zero(), &el(&[1.0])).is_err());
    }

    #[test]
    fn json_round_trip() {
        let alg = OrthogonalAlgebra::so3();
        let back = OrthogonalAlgebra::from_json_str(&alg.to_json_string()).unwrap();
        assert_eq!(back, alg);
        assert!(matches!(OrthogonalAlgebra::by_name("e8"), Err(Error::UnknownAlgebra(_))));
    }

    #[test]
    fn corrupted_constant_fails_verification() {
        let bad = OrthogonalAlgebra::sl2().with_corrupted_constant(0, 1, 2, c(1e-3));
        assert!(bad.verify(1e-12).is_err());
    }
}
