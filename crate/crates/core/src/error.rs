use thiserror::Error;

/// Errors raised while building operators or evaluating measures.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("dimension {dim} outside supported range 1..={max}")]
    DimensionOutOfRange { dim: usize, max: usize },

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("operator is not Hermitian (max |H_ij - conj(H_ji)| = {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("eigensolver did not converge")]
    EigenNoConvergence,

    #[error("eigenvalue {eigenvalue} outside [0, 1] beyond tolerance {tol:e}")]
    SpectrumOutOfRange { eigenvalue: f64, tol: f64 },

    #[error("not a state: {0}")]
    NotAState(String),

    #[error("Bloch parameters violate the effect condition: a0 = {a0}, |a| = {norm}")]
    BlochConstraint { a0: f64, norm: f64 },

    #[error("negative discriminant X^2 - Y = {0:e}")]
    NegativeDiscriminant(f64),

    #[error("internal consistency check failed: {0}")]
    Inconsistent(String),

    #[error("unknown measure `{0}`")]
    UnknownMeasure(String),

    #[error("measure {measure} requires a qubit effect, got dimension {dim}")]
    QubitOnly { measure: &'static str, dim: usize },

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
