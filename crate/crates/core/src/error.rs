use thiserror::Error;

/// Errors raised anywhere in the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix is not square ({rows}x{cols})")]
    NonSquare { rows: usize, cols: usize },

    #[error("matrix is not Hermitian (|H - H^dagger|_F = {deviation:.3e})")]
    NonHermitian { deviation: f64 },

    #[error("shape mismatch: expected {expected:?}, found {found:?}")]
    ShapeMismatch {
        expected: (usize, usize),
        found: (usize, usize),
    },

    #[error("matrix contains non-finite entries")]
    NonFinite,

    #[error("invalid density matrix: {0}")]
    Validation(String),

    #[error("local dimension must be at least 2, got {0}")]
    InvalidDimension(usize),

    #[error("dimension too large: {requested} exceeds the cap of {cap}")]
    DimensionTooLarge { requested: usize, cap: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("operator set has {found} elements, expected {expected}")]
    BasisSizeMismatch { expected: usize, found: usize },

    #[error("bad bipartition: {0}")]
    BadPartition(String),

    #[error("state is not symmetric")]
    NotSymmetric,

    #[error("state is not permutationally invariant")]
    NotPermutationallyInvariant,

    #[error("state is not PPT (min eigenvalue of the partial transpose {min_eigenvalue:.3e})")]
    NotPpt { min_eigenvalue: f64 },

    #[error("operator is not positive semidefinite (min eigenvalue {min_eigenvalue:.3e})")]
    NotPsd { min_eigenvalue: f64 },

    #[error("operator is not supported on the symmetric subspace")]
    NotSymmetricOperator,

    #[error("generator {index} is not Hermitian")]
    NonHermitianGenerator { index: usize },

    #[error("invalid coefficient {value} at index {index}")]
    InvalidCoefficient { index: usize, value: f64 },

    #[error("bad decomposition: {0}")]
    BadDecomposition(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("unknown builtin state '{0}'")]
    UnknownBuiltin(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("io error: {0}")]
    Io(String),

    #[error("numerical inconsistency: {0}")]
    Numerical(String),
}

pub type Result<T> = std::result::Result<T, Error>;

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
