//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("zero vector is outside the metric domain")]
    ZeroVector,

    /// Input violates a metric's domain constraints (negative component,
    /// L1 normalization off by more than the tolerance, non-finite value).
    #[error("metric domain violation: {0}")]
    Domain(String),

    #[error("matrix is not symmetric positive semidefinite: {0}")]
    NotPsd(String),

    /// A base-simplex altitude fell below the degeneracy tolerance; the
    /// caller may re-select references.
    #[error("degenerate simplex: altitude {altitude:e} at vertex {vertex}")]
    DegenerateSimplex { vertex: usize, altitude: f64 },

    /// A radicand went negative beyond the embedding tolerance: the supplied
    /// distances cannot be realized in Euclidean space.
    #[error("distances not embeddable: radicand {radicand:e} at coordinate {index}")]
    NotEmbeddable { index: usize, radicand: f64 },

    /// Internal floating-point guard tripped (e.g. a metric radicand more
    /// negative than rounding noise can explain).
    #[error("numeric guard: {0}")]
    Numeric(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("malformed file: {0}")]
    MalformedFile(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
