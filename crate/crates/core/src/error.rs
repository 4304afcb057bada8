use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("data length {len} does not match a {rows}x{cols} matrix")]
    ShapeMismatch { rows: usize, cols: usize, len: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is not Hermitian (max |M - M^dagger| = {0:e})")]
    NotHermitian(f64),

    #[error("trace is {0}, expected 1")]
    InvalidTrace(f64),

    #[error("not positive semidefinite (min eigenvalue {0:e})")]
    NotPositive(f64),

    #[error("state vector norm is {0}, expected 1")]
    NotNormalized(f64),

    #[error("subsystem index {index} out of range for {parts} parts")]
    SubsystemOutOfRange { index: usize, parts: usize },

    #[error("operation needs a bipartite shape, got {0} parts")]
    NotBipartite(usize),

    #[error("bipartition is asymmetric ({0} vs {1})")]
    AsymmetricBipartition(usize, usize),

    #[error("{value} is not a perfect {power}-th power")]
    NotPerfectPower { value: usize, power: u32 },

    #[error("permutation image is not a bijection")]
    InvalidPermutation,

    #[error("operator dimension {dim} exceeds the configured maximum {max}")]
    DimensionCap { dim: usize, max: usize },

    #[error("argument out of domain: {0}")]
    Domain(&'static str),

    #[error("invalid protocol configuration: {0}")]
    InvalidConfig(&'static str),

    #[error("mixed-state input requires the mixed-state extension to be enabled")]
    MixedInputDisabled,

    #[error("refusing to label a global-branch state with k = {k} above the trusted bound {bound}")]
    LabelRefused { k: usize, bound: f64 },

    #[error("not enough data: {0}")]
    InsufficientData(&'static str),

    #[error("continued fraction failed to converge")]
    NoConvergence,
}

pub type Result<T> = core::result::Result<T, Error>;
