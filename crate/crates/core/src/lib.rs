//! Affine Kac-Moody algebras over orthogonal Lie algebras, the phase space
//! `T*G~_k` of a loop group, its momentum maps and Poisson structure.
//!
//! Layers, bottom up:
//!
//! * [`algebra`]: finite-dimensional `g` with structure constants and the
//!   trace form.
//! * [`loops`]: the loop algebra as banded Fourier series.
//! * [`affine`]: the full affine algebra `C ⋉ (g~ ⊕ C)`, its dual, the
//!   coadjoint action and the invariants `kappa` and `pi`.
//! * [`phase`]: grid-sampled group loops, the momentum maps `J^L`, `J^R`,
//!   the scalar momentum, and the twisted Poisson bracket.

pub mod affine;
pub mod algebra;
pub mod error;
pub mod loops;
pub mod mutation;
pub mod phase;
pub mod sampling;
pub mod spectral;

pub use affine::{AffineCovector, AffineVector};
pub use algebra::{AlgebraElement, GroupKind, Mat, OrthogonalAlgebra};
pub use error::{Error, Result};
pub use loops::LoopElement;
pub use num_complex::Complex64;
