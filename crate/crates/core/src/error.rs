use thiserror::Error;

/// Errors produced by the geodesic engine.
///
/// Variants follow the per-operation error contracts: constructors reject
/// malformed norms and fields, evaluation rejects points outside the chart
/// domain, and phase-space operations reject the zero covector (the field
/// lives on the slit bundle).
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid norm definition: {0}")]
    InvalidNorm(String),

    #[error("invalid field definition: {0}")]
    InvalidField(String),

    #[error("covector is zero; the extended field lives on the slit bundle")]
    ZeroCovector,

    #[error("control vector is zero")]
    ZeroControl,

    #[error("operation requires a strictly convex norm (got a polyhedral one)")]
    NotStrictlyConvex,

    #[error("point {point:?} is outside the chart domain")]
    OutOfDomain { point: Vec<f64> },

    #[error("group element has non-positive scale b = {b}")]
    InvalidGroupElement { b: f64 },

    #[error("endpoints coincide; no connecting geodesic is defined")]
    IdenticalPoints,

    #[error("trace is a vertical line; no circle parameters exist")]
    VerticalGeodesic,

    #[error("Hamiltonian drifts by {drift:.3e}, above the tolerance {tol:.3e}")]
    NonConstantHamiltonian { drift: f64, tol: f64 },

    #[error("support set is a face and the face policy forbids selecting a vertex")]
    NoProgress,

    #[error("target node is unreachable from the source")]
    Unreachable,

    #[error("trajectory endpoint {point:?} lies outside the oracle window")]
    OutOfWindow { point: Vec<f64> },

    #[error("config error: {0}")]
    Config(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}
