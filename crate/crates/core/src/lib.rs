//! Numerical core of the two-bubble construction for the prescribed
//! scalar-curvature equation Δv + (c̃ₙK)·v^{(n+2)/(n−2)} = 0 on Rⁿ.
//!
//! The crate builds the finite-dimensional side of a Lyapunov–Schmidt
//! reduction around a pair of standard bubbles planted at two nearby
//! "twin pseudo-peak" critical points of K:
//!
//! * [`polyalg`] — exact algebra of homogeneous polynomials (evaluation,
//!   Laplacian, the iterated-Laplacian number ϖ, even-moment coefficients);
//! * [`bubble`] — the bubble family V_{λ,ξ}, its λ/ξ derivatives and a
//!   finite-difference PDE-residual verifier;
//! * [`peaks`] — the twin pseudo-peak model of K with hypothesis validation;
//! * [`quad`] — integral engines: exact angular-moment × radial-Beta
//!   reduction, cylindrical 2-D quadrature for two-center integrals,
//!   seeded Monte Carlo, and the verification suites built on them;
//! * [`reduce`] — reduction constants, the reduced map T, its closed-form
//!   root P_τ, the analytic Jacobian, and Brouwer-degree certificates;
//! * [`sphere`] — stereographic projection and conformal solution transfer.
//!
//! Everything is deterministic given a seed; all values are plain `f64`.

pub mod bubble;
pub mod error;
pub mod peaks;
pub mod polyalg;
pub mod quad;
pub mod reduce;
pub mod sphere;
pub mod suites;

pub use bubble::{Bubble, BubbleConfig};
pub use error::Error;
pub use peaks::{RemainderModel, TwinPeakModel, Violation};
pub use polyalg::{HomogeneousPoly, MultiIndex};
pub use quad::{IntegralEstimate, Method};
pub use reduce::{DegreeOutcome, ReducedPoint, ReductionConstants};
pub use sphere::SpherePoint;

/// Result alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
