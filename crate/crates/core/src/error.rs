use thiserror::Error;

/// Errors raised by the algebra, loop, affine and phase-space layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("operands belong to different algebras")]
    AlgebraMismatch,

    #[error("invalid basis: {0}")]
    InvalidBasis(String),

    #[error("basis matrices are linearly dependent (gram condition ratio {ratio:e})")]
    LinearlyDependent { ratio: f64 },

    #[error("commutator of basis elements {i} and {j} leaves the span (residual {residual:e})")]
    NotClosed { i: usize, j: usize, residual: f64 },

    #[error("trace form is degenerate (condition ratio {ratio:e})")]
    DegenerateForm { ratio: f64 },

    #[error("algebra invariant violated: {0}")]
    InvariantViolation(String),

    #[error("unknown algebra `{0}`")]
    UnknownAlgebra(String),

    #[error("a grid of {grid} points cannot resolve a loop of band {band}")]
    AliasRisk { band: usize, grid: usize },

    #[error("spectral tail energy {tail_energy:e} exceeds the alias threshold")]
    AliasWarning { tail_energy: f64 },

    #[error("group constraint violated: {0}")]
    ConstraintViolation(String),

    #[error("grid sizes differ: {left} vs {right}")]
    GridMismatch { left: usize, right: usize },

    #[error("identity requires a nonzero level k")]
    DivisionByCenter,

    #[error("momentum kind {kind} does not accept this weight")]
    KindMismatch { kind: &'static str },

    #[error("i/o failure: {0}")]
    Io(String),

    #[error("parse failure: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
