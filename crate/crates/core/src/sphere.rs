//! Stereographic projection between Sⁿ and Rⁿ and the conformal transfer of
//! solutions.
//!
//! The projection sends the north pole N = (0,…,0,1) to infinity:
//! yᵢ = xᵢ/(1 − x_{n+1}), with inverse xᵢ = 2yᵢ/(1+r²),
//! x_{n+1} = (r²−1)/(r²+1).  The round metric pulls back to
//! [4/(1+r²)²]·g₀, and a solution v on Rⁿ transfers to
//! U(x) = v(y)·((1+|y|²)/2)^{(n−2)/2}.

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Guard below which 1 − x_{n+1} is numerically indistinguishable from the
/// north pole.
const POLE_GUARD: f64 = 1e-12;

/// A point of the unit sphere Sⁿ ⊂ R^{n+1}.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SpherePoint {
    pub coords: Vec<f64>,
}

impl SpherePoint {
    /// Validates |x|² = 1 to 1e−12.
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        let norm_sq: f64 = coords.iter().map(|x| x * x).sum();
        let defect = (norm_sq - 1.0).abs();
        if defect > 1e-12 {
            return Err(Error::OffSphere { defect });
        }
        Ok(SpherePoint { coords })
    }

    /// Ambient dimension of the projected space (n for Sⁿ ⊂ R^{n+1}).
    pub fn n(&self) -> usize {
        self.coords.len() - 1
    }
}

/// Stereographic projection yᵢ = xᵢ/(1 − x_{n+1}); errors at the north pole.
pub fn project(x: &SpherePoint) -> Result<Vec<f64>> {
    let n = x.n();
    let denom = 1.0 - x.coords[n];
    if denom < POLE_GUARD {
        return Err(Error::NorthPole);
    }
    Ok(x.coords[..n].iter().map(|&c| c / denom).collect())
}

/// Inverse projection xᵢ = 2yᵢ/(1+r²), x_{n+1} = (r²−1)/(r²+1).
pub fn unproject(y: &[f64]) -> SpherePoint {
    let r2: f64 = y.iter().map(|v| v * v).sum();
    let mut coords: Vec<f64> = y.iter().map(|&v| 2.0 * v / (1.0 + r2)).collect();
    coords.push((r2 - 1.0) / (r2 + 1.0));
    SpherePoint { coords }
}

/// Conformal factor of the pullback metric at y: g₁ = [4/(1+r²)²]·g₀.
pub fn conformal_factor(y: &[f64]) -> f64 {
    let r2: f64 = y.iter().map(|v| v * v).sum();
    4.0 / (1.0 + r2).powi(2)
}

/// Transfers a flat-space solution v back to the sphere:
/// U(x) = v(y)·((1+|y|²)/2)^{(n−2)/2} with y the projection of x.
pub fn transfer_solution<F: Fn(&[f64]) -> f64>(v: F, x: &SpherePoint) -> Result<f64> {
    let n = x.n() as f64;
    let y = project(x)?;
    let r2: f64 = y.iter().map(|v| v * v).sum();
    Ok(v(&y) * ((1.0 + r2) / 2.0).powf((n - 2.0) / 2.0))
}
