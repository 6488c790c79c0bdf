use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not symmetric: entry ({row}, {col}) differs from its transpose")]
    NotSymmetric { row: usize, col: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("matrix is not positive definite (pivot {pivot_index} at or below tolerance)")]
    NotPositiveDefinite { pivot_index: usize },

    #[error("Jacobi eigensolver did not converge within {sweeps} sweeps")]
    NoConvergence { sweeps: usize },

    #[error("index {index} out of range for size {len}")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("circulant first row is not symmetric: c[{index}] != c[N - {index}]")]
    NotSymmetricCirculant { index: usize },

    #[error("nearest-neighbour coupling must be positive, got g1 = {g1}")]
    NonpositiveG1 { g1: f64 },

    #[error("power-law exponent gamma = {gamma} must exceed 3 for an N-independent guarantee")]
    InvalidExponent { gamma: f64 },

    #[error("series sum k^-s diverges for s = {s} <= 1")]
    DivergentSeries { s: f64 },

    #[error("no sign change on bracket [{lo}, {hi}]: g(lo) = {g_lo:e}, g(hi) = {g_hi:e}")]
    NoSignChange { lo: f64, hi: f64, g_lo: f64, g_hi: f64 },

    #[error("bisection did not reach tolerance within {iterations} iterations")]
    MaxIterations { iterations: usize },

    #[error("covariance is indefinite (min eigenvalue {min_eigenvalue:e})")]
    IndefiniteCovariance { min_eigenvalue: f64 },

    #[error("quadrature failed: error estimate {estimated_error:e} above tolerance {tolerance:e}")]
    QuadratureFailure { estimated_error: f64, tolerance: f64 },

    #[error("time {t} outside the ring parameter range [0, 2*pi]")]
    GridOutOfRange { t: f64 },
}
