//! Error type shared by the numerical modules.

use thiserror::Error;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("polynomial degree {degree} too low for the Laplacian (need ≥ 2)")]
    DegreeTooLow { degree: u32 },

    #[error("operation requires even degree, got {degree}")]
    OddDegree { degree: u32 },

    #[error("moment integral diverges: 2p = {two_p} must exceed 2h + n = {bound}")]
    DivergentMoment { two_p: i64, bound: i64 },

    #[error("interaction exponents must satisfy P + Q = n (got P = {p}, Q = {q}, n = {n})")]
    ExponentSum { p: f64, q: f64, n: usize },

    #[error("flatness must be even with 2 ≤ ℓ < n − 2 (got ℓ = {ell}, n = {n})")]
    InvalidFlatness { ell: u32, n: usize },

    #[error("iterated Laplacian ϖ₂ vanishes; the scale ratio α is undefined")]
    ZeroVarpi,

    #[error("north pole has no stereographic image")]
    NorthPole,

    #[error("point does not lie on the unit sphere (|x|² − 1 = {defect:e})")]
    OffSphere { defect: f64 },

    #[error("map has a root too close to the box boundary (min boundary norm {min_norm:e} < {threshold:e})")]
    RootOnBoundary { min_norm: f64, threshold: f64 },

    #[error("singular Jacobian at a located root (|det| = {det:e})")]
    SingularJacobian { det: f64 },

    #[error("Newton iteration failed to locate any root in the box")]
    NoRootFound,

    #[error("{0}")]
    Invalid(String),
}
