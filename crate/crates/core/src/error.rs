use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("non-finite entry encountered")]
    NonFinite,

    #[error("matrix is not Hermitian (deviation {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("local dimension must be at least 2, got {0}")]
    InvalidDimension(usize),

    #[error("tolerance must be positive and finite, got {0}")]
    InvalidTolerance(f64),

    #[error("operators are not an orthonormal traceless family (deviation {deviation:e})")]
    NotOrthonormal { deviation: f64 },

    #[error("invalid state set: {0}")]
    InvalidStateSet(&'static str),

    #[error("index {index} out of range (bound {bound})")]
    IndexOutOfRange { index: usize, bound: usize },

    #[error("states {i} and {j} are not mutually orthogonal (overlap {overlap:e})")]
    NotOrthogonal { i: usize, j: usize, overlap: f64 },

    #[error("party {party} cannot perform a nontrivial orthogonality-preserving measurement (t = d^2 - 1)")]
    Infeasible { party: usize },

    #[error("coefficient direction is zero")]
    ZeroDirection,

    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("party {party} has dimension {dim}; a qubit is required")]
    NotQubit { party: usize, dim: usize },

    #[error("measurement is empty")]
    EmptyMeasurement,

    #[error("POVM elements do not sum to the identity (residual {residual:e})")]
    Incomplete { residual: f64 },

    #[error("POVM element {index} is not positive semidefinite (min eigenvalue {min_eigenvalue:e})")]
    NotPositive { index: usize, min_eigenvalue: f64 },

    #[error("Kraus operator {index} does not reproduce its POVM element (residual {residual:e})")]
    KrausMismatch { index: usize, residual: f64 },

    #[error("element {element} does not preserve orthogonality of states {i} and {j} (overlap {overlap:e})")]
    NotOrthogonalityPreserving { element: usize, i: usize, j: usize, overlap: f64 },

    #[error("conditional states {i} and {j} after outcome {outcome} are not orthogonal (overlap {overlap:e})")]
    ConditionalOrthogonality { outcome: usize, i: usize, j: usize, overlap: f64 },

    #[error("protocol requires exactly two parties, found {0}")]
    NotBipartite(usize),

    #[error("protocol requires a two-dimensional party")]
    NoQubitParty,

    #[error("invalid family parameters: {0}")]
    InvalidParams(&'static str),

    #[error("numerical breakdown: {0}")]
    NumericalBreakdown(&'static str),
}

pub type Result<T> = core::result::Result<T, Error>;

pub(crate) fn check_tol(tol: f64) -> Result<()> {
    if tol.is_finite() && tol > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidTolerance(tol))
    }
}
