//! The standard-bubble family V_{λ,ξ} and two-bubble configuration bookkeeping.
//!
//! V_{λ,ξ}(y) = (λ/(λ² + |y−ξ|²))^{(n−2)/2} solves
//! ΔV + n(n−2)·V^{(n+2)/(n−2)} = 0 on Rⁿ.  All derivative formulas here are
//! analytic; finite differences appear only in the residual verifier and in
//! test oracles.

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Squared Euclidean distance.
pub(crate) fn dist_sq(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// A single bubble: concentration scale λ > 0 and center ξ ∈ Rⁿ.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Bubble {
    pub n: usize,
    pub lambda: f64,
    pub xi: Vec<f64>,
}

impl Bubble {
    pub fn new(n: usize, lambda: f64, xi: Vec<f64>) -> Result<Self> {
        if xi.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: xi.len(),
            });
        }
        if lambda <= 0.0 {
            return Err(Error::Invalid(format!("lambda must be positive, got {lambda}")));
        }
        Ok(Bubble { n, lambda, xi })
    }

    /// V_{λ,ξ}(y) = (λ/(λ² + |y−ξ|²))^{(n−2)/2}.
    pub fn value(&self, y: &[f64]) -> f64 {
        let r2 = dist_sq(y, &self.xi);
        (self.lambda / (self.lambda * self.lambda + r2)).powf((self.n as f64 - 2.0) / 2.0)
    }

    /// ∂V/∂λ = −((n−2)/2)·λ^{(n−4)/2}·(λ² − |y−ξ|²)/(λ² + |y−ξ|²)^{n/2}.
    pub fn dlambda(&self, y: &[f64]) -> f64 {
        let n = self.n as f64;
        let lam = self.lambda;
        let r2 = dist_sq(y, &self.xi);
        -((n - 2.0) / 2.0) * lam.powf((n - 4.0) / 2.0) * (lam * lam - r2)
            / (lam * lam + r2).powf(n / 2.0)
    }

    /// ∂V/∂ξⱼ = −(n−2)·λ^{(n−2)/2}·(ξⱼ − yⱼ)/(λ² + |y−ξ|²)^{n/2}.
    pub fn dxi(&self, y: &[f64], j: usize) -> f64 {
        let n = self.n as f64;
        let lam = self.lambda;
        let r2 = dist_sq(y, &self.xi);
        -(n - 2.0) * lam.powf((n - 2.0) / 2.0) * (self.xi[j] - y[j])
            / (lam * lam + r2).powf(n / 2.0)
    }

    /// Residual ΔV + n(n−2)·V^{(n+2)/(n−2)} at `y`, with the Laplacian taken
    /// by 4th-order central differences, step h = 1e−3·max(λ, |y−ξ|).
    ///
    /// For the exact bubble this is discretization error only.
    pub fn pde_residual(&self, y: &[f64]) -> f64 {
        let n = self.n as f64;
        let r = dist_sq(y, &self.xi).sqrt();
        let h = 1e-3 * self.lambda.max(r);
        let mut lap = 0.0;
        let mut yy = y.to_vec();
        let center = self.value(y);
        for i in 0..self.n {
            let y0 = yy[i];
            yy[i] = y0 + 2.0 * h;
            let fpp = self.value(&yy);
            yy[i] = y0 + h;
            let fp = self.value(&yy);
            yy[i] = y0 - h;
            let fm = self.value(&yy);
            yy[i] = y0 - 2.0 * h;
            let fmm = self.value(&yy);
            yy[i] = y0;
            lap += (-fpp + 16.0 * fp - 30.0 * center + 16.0 * fm - fmm) / (12.0 * h * h);
        }
        lap + n * (n - 2.0) * center.powf((n + 2.0) / (n - 2.0))
    }

    /// Local scale of ΔV = −n(n−2)V^{(n+2)/(n−2)}, for relative residual checks.
    pub fn laplacian_scale(&self, y: &[f64]) -> f64 {
        let n = self.n as f64;
        n * (n - 2.0) * self.value(y).powf((n + 2.0) / (n - 2.0))
    }
}

/// Two-bubble configuration with the peak gap γ = |q₂|.
///
/// Derived quantities follow the reduced-space bookkeeping:
/// λ = √(λ₁λ₂), D = γ/λ and d = |ξ₁ − ξ₂|/λ.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ConfigWire", into = "ConfigWire")]
pub struct BubbleConfig {
    pub b1: Bubble,
    pub b2: Bubble,
    pub gamma: f64,
}

/// Wire format: `{"n", "lambda1", "lambda2", "xi1", "xi2", "gamma"}`.
#[derive(Serialize, Deserialize)]
struct ConfigWire {
    n: usize,
    lambda1: f64,
    lambda2: f64,
    xi1: Vec<f64>,
    xi2: Vec<f64>,
    gamma: f64,
}

impl From<BubbleConfig> for ConfigWire {
    fn from(c: BubbleConfig) -> Self {
        ConfigWire {
            n: c.b1.n,
            lambda1: c.b1.lambda,
            lambda2: c.b2.lambda,
            xi1: c.b1.xi,
            xi2: c.b2.xi,
            gamma: c.gamma,
        }
    }
}

impl TryFrom<ConfigWire> for BubbleConfig {
    type Error = Error;

    fn try_from(w: ConfigWire) -> Result<Self> {
        BubbleConfig::new(
            Bubble::new(w.n, w.lambda1, w.xi1)?,
            Bubble::new(w.n, w.lambda2, w.xi2)?,
            w.gamma,
        )
    }
}

impl BubbleConfig {
    pub fn new(b1: Bubble, b2: Bubble, gamma: f64) -> Result<Self> {
        if b1.n != b2.n {
            return Err(Error::DimensionMismatch {
                expected: b1.n,
                got: b2.n,
            });
        }
        if gamma <= 0.0 {
            return Err(Error::Invalid(format!("gamma must be positive, got {gamma}")));
        }
        Ok(BubbleConfig { b1, b2, gamma })
    }

    pub fn n(&self) -> usize {
        self.b1.n
    }

    /// Geometric-mean scale λ = √(λ₁λ₂).
    pub fn lambda(&self) -> f64 {
        (self.b1.lambda * self.b2.lambda).sqrt()
    }

    /// Concentration ratio D = γ/λ, the large parameter of the construction.
    pub fn cap_d(&self) -> f64 {
        self.gamma / self.lambda()
    }

    /// Center separation in bubble units, d = |ξ₁ − ξ₂|/λ.
    pub fn d(&self) -> f64 {
        dist_sq(&self.b1.xi, &self.b2.xi).sqrt() / self.lambda()
    }

    /// Sum of bubbles z_σ = V₁ + V₂ at `y`.
    pub fn z_sigma(&self, y: &[f64]) -> f64 {
        self.b1.value(y) + self.b2.value(y)
    }
}
