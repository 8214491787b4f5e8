//! Integral engines.
//!
//! Three routes cross-check each other throughout:
//!
//! 1. exact angular-moment × radial-Beta reduction for single-center
//!    integrals ∫ Q(y)(1+|y|²)^{−p} dy (the moment route);
//! 2. panelled Gauss–Legendre quadrature in cylindrical coordinates for
//!    two-center bubble integrals;
//! 3. seeded importance-sampling Monte Carlo.

pub mod gauss;
mod grid2d;
mod inequalities;
mod mass;
mod mc;
mod pairing;

pub use grid2d::CylGrid;
pub use inequalities::{elementary_inequality_suite, InequalityReport, InequalityRow};
pub use mass::{mass_bound_check, MassBound, MassRegime};
pub use mc::mc_moment_estimate;
pub use pairing::{
    comparability_ok, grad_norm_dlambda, grad_norm_dxi, interaction_s, io_prime_pairing,
    io_prime_pairing_axial, weak_interaction_norm_proxy, Direction,
};

use serde::{Deserialize, Serialize};

use crate::polyalg::{even_descending_product, reduction_coefficient, HomogeneousPoly};
use crate::{Error, Result};

/// How a numeric value was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Method {
    #[serde(rename = "exact-reduction")]
    ExactReduction,
    #[serde(rename = "quad2d")]
    Quad2d,
    #[serde(rename = "monte-carlo")]
    MonteCarlo,
}

/// Numeric value with an error estimate and the method that produced it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntegralEstimate {
    pub value: f64,
    pub abs_error: f64,
    pub method: Method,
    pub samples_or_nodes: u64,
    /// Seed used by the sampler; `None` for deterministic methods.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl IntegralEstimate {
    pub fn exact(value: f64) -> Self {
        IntegralEstimate {
            value,
            abs_error: 1e-14 * value.abs(),
            method: Method::ExactReduction,
            samples_or_nodes: 0,
            seed: None,
        }
    }
}

/// Γ(x) for positive half-integer arguments x = two_x/2, exactly by recursion
/// from Γ(1) = 1 and Γ(1/2) = √π.
pub fn gamma_half(two_x: i64) -> f64 {
    assert!(two_x > 0, "gamma_half needs a positive argument");
    let mut val = if two_x % 2 == 0 { 1.0 } else { std::f64::consts::PI.sqrt() };
    let mut k = if two_x % 2 == 0 { 2 } else { 1 };
    while k < two_x {
        val *= k as f64 / 2.0;
        k += 2;
    }
    val
}

/// Surface measure of the unit (n−1)-sphere, ωₙ = 2π^{n/2}/Γ(n/2).
pub fn sphere_area(n: usize) -> f64 {
    2.0 * std::f64::consts::PI.powf(n as f64 / 2.0) / gamma_half(n as i64)
}

/// ∫_{Rⁿ} y₁²⋯y_h²·(1+|y|²)^{−p} dy for 2p = `two_p` (half-integer powers
/// arise in the gradient-norm identities).
///
/// Splits into the angular moment of y₁²⋯y_h² on S^{n−1} times the radial
/// Beta integral ½·B(h + n/2, p − h − n/2); converges iff 2p > 2h + n.
pub fn j_moment_half(n: usize, h: u32, two_p: i64) -> Result<f64> {
    let bound = 2 * h as i64 + n as i64;
    if two_p <= bound {
        return Err(Error::DivergentMoment { two_p, bound });
    }
    // ∫_{S^{n−1}} θ₁²⋯θ_h² dσ = 2·Γ(3/2)^h·Γ(1/2)^{n−h} / Γ(n/2 + h)
    let angular = 2.0 * gamma_half(3).powi(h as i32) * gamma_half(1).powi(n as i32 - h as i32)
        / gamma_half(n as i64 + 2 * h as i64);
    let a = n as i64 + 2 * h as i64; // 2·(h + n/2)
    let b = two_p - a; // 2·(p − h − n/2)
    let radial = 0.5 * gamma_half(a) * gamma_half(b) / gamma_half(a + b);
    Ok(angular * radial)
}

/// J-moment with integer decay power p: ∫ y₁²⋯y_h²·(1+|y|²)^{−p} dy.
pub fn j_moment(n: usize, h: u32, p: u32) -> Result<f64> {
    j_moment_half(n, h, 2 * p as i64)
}

/// ∫ y^α (1+|y|²)^{−p} dy for a single monomial, by the moment reduction:
/// (α₁)!₋₂⋯(αₙ)!₋₂ times the reference moment of the same degree.
pub fn monomial_moment(n: usize, alpha: &crate::polyalg::MultiIndex, p: u32) -> Result<f64> {
    let ell = alpha.degree();
    if ell % 2 != 0 {
        return Ok(0.0); // odd total degree integrates to zero by symmetry
    }
    let rc = reduction_coefficient(alpha);
    if rc == 0 {
        return Ok(0.0);
    }
    Ok(rc as f64 * j_moment(n, ell / 2, p)?)
}

/// J_n(h) − 2·J_{n+1}(h); the construction needs this strictly positive.
pub fn positivity_check(n: usize, h: u32) -> Result<f64> {
    Ok(j_moment(n, h, n as u32)? - 2.0 * j_moment(n, h, n as u32 + 1)?)
}

/// Both sides of the moment-reduction identity for a homogeneous polynomial,
/// plus an independent Monte-Carlo estimate of the left side.
#[derive(Debug, Clone)]
pub struct ReductionCheck {
    /// ∫ Q(y)(1+|y|²)^{−p} dy by exact term-by-term moment reduction.
    pub lhs: IntegralEstimate,
    /// J/(ℓ(ℓ−2)⋯2) · Δ^{(ℓ/2)}Q, the closed form.
    pub rhs: f64,
    /// Monte-Carlo cross-estimate of the same integral.
    pub mc: IntegralEstimate,
}

/// Checks ∫ Q_ℓ(y)(1+|y|²)^{−p} dy = J/(ℓ(ℓ−2)⋯2)·Δ^{(h_ℓ)}Q_ℓ.
///
/// The left side sums exact monomial moments (the even-moment coefficient
/// route); the right side divides the reference moment by the even
/// descending product and multiplies by the iterated Laplacian computed
/// symbolically.  `mc_samples` controls the Monte-Carlo cross-check.
pub fn reduction_lemma_check(
    poly: &HomogeneousPoly,
    p: u32,
    seed: u64,
    mc_samples: u64,
) -> Result<ReductionCheck> {
    let ell = poly.degree();
    if ell % 2 != 0 {
        return Err(Error::OddDegree { degree: ell });
    }
    let n = poly.dimension();
    let mut lhs = 0.0;
    for (alpha, c) in poly.terms() {
        lhs += c * monomial_moment(n, alpha, p)?;
    }
    let rhs = if ell == 0 {
        j_moment(n, 0, p)? * poly.iterated_laplacian_value()?
    } else {
        j_moment(n, ell / 2, p)? * poly.iterated_laplacian_value()?
            / even_descending_product(ell)
    };
    let mc = mc_moment_estimate(poly, p, seed, mc_samples)?;
    Ok(ReductionCheck {
        lhs: IntegralEstimate::exact(lhs),
        rhs,
        mc,
    })
}
