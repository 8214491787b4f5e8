//! The finite-dimensional heart of the construction.
//!
//! The reduced map on (λ₁, λ₂; ξ₁, ξ₂) ∈ (R⁺)² × (Rⁿ)²,
//!
//!   T₁ₒ = C₁⁺|ϖ₁|λ₁^ℓ − (√(λ₁λ₂))^{n−2}/γ^{n−2}
//!   T₂ₒ = C₁⁺|ϖ₂|λ₂^ℓ − (√(λ₁λ₂))^{n−2}/γ^{n−2}
//!   T₁ⱼ = C₂⁺ϖ₁λ₁^ℓ·ξ₁ⱼ/λ₁ + C₃⁺·(1/λ₂)·(√(λ₁λ₂))ⁿ/γⁿ·(ξ₁ⱼ−ξ₂ⱼ)
//!   T₂ⱼ = C₂⁺ϖ₂λ₂^ℓ·(ξ₂ⱼ−q₂ⱼ)/λ₂ + C₃⁺·(1/λ₁)·(√(λ₁λ₂))ⁿ/γⁿ·(ξ₂ⱼ−ξ₁ⱼ)
//!
//! balances the peak contribution (first terms) against the bubble
//! interaction (second terms).  Its root P_τ is solved in closed form, the
//! Jacobian is analytic, and the Brouwer degree on a box around P_τ comes
//! out as −1, which is what certifies the construction.

mod degree;

pub use degree::{degree_on_box, multi_start_roots, DegreeOutcome};

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::peaks::TwinPeakModel;
use crate::polyalg::even_descending_product;
use crate::quad::{j_moment, j_moment_half, sphere_area};
use crate::{Error, Result};

/// Dimension- and flatness-dependent constants of the reduced expansion.
///
/// `ca`, `cb`, `cc`, `cd` are the peak/interaction coefficients of the
/// quasi-hyperbolic gradient; `c1 = ca/cb`, `c2 = cc/cb`, `c3 = cd/cb` are
/// their normalized versions entering the map T itself.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReductionConstants {
    pub n: usize,
    pub ell: u32,
    /// ωₙ = Vol(S^{n−1}).
    pub omega_n: f64,
    /// Jₙ = ∫ y₁²⋯y_h²(1+|y|²)^{−n} dy with h = ℓ/2.
    pub jn: f64,
    /// J_{n+1}, the same moment at power n+1.
    pub jn1: f64,
    /// C̄ₐ⁺ = ((n−2)/2)·(Jₙ − 2J_{n+1})/(ℓ(ℓ−2)⋯2).
    pub ca: f64,
    /// C̄_b⁺ = ωₙ(n−2)²/2.
    pub cb: f64,
    /// C̄_c⁺ = (n−2)·J_{n+1}/(ℓ(ℓ−2)⋯2).
    pub cc: f64,
    /// C̄_d⁺ = (n+2)(n−2)·∫Y₁²(1+|Y|²)^{−(n/2+2)}dY.
    pub cd: f64,
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
}

/// Fills every constant from the dimension and flatness alone.
pub fn compute_constants(n: usize, ell: u32) -> Result<ReductionConstants> {
    if ell % 2 != 0 || ell < 2 || ell as i64 >= n as i64 - 2 {
        return Err(Error::InvalidFlatness { ell, n });
    }
    let nf = n as f64;
    let h = ell / 2;
    let jn = j_moment(n, h, n as u32)?;
    let jn1 = j_moment(n, h, n as u32 + 1)?;
    let denom = even_descending_product(ell);
    let ca = (nf - 2.0) / 2.0 * (jn - 2.0 * jn1) / denom;
    let cb = sphere_area(n) * (nf - 2.0) * (nf - 2.0) / 2.0;
    let cc = (nf - 2.0) * jn1 / denom;
    let cd = (nf + 2.0) * (nf - 2.0) * j_moment_half(n, 1, n as i64 + 4)?;
    Ok(ReductionConstants {
        n,
        ell,
        omega_n: sphere_area(n),
        jn,
        jn1,
        ca,
        cb,
        cc,
        cd,
        c1: ca / cb,
        c2: cc / cb,
        c3: cd / cb,
    })
}

/// A point of the reduced space (λ₁, λ₂; ξ₁, ξ₂).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReducedPoint {
    pub lambda1: f64,
    pub lambda2: f64,
    pub xi1: Vec<f64>,
    pub xi2: Vec<f64>,
}

impl ReducedPoint {
    pub fn dim(&self) -> usize {
        2 + self.xi1.len() + self.xi2.len()
    }

    /// Flat layout [λ₁, λ₂, ξ₁…, ξ₂…] used by the map and the Jacobian.
    pub fn to_vec(&self) -> Vec<f64> {
        let mut v = Vec::with_capacity(self.dim());
        v.push(self.lambda1);
        v.push(self.lambda2);
        v.extend_from_slice(&self.xi1);
        v.extend_from_slice(&self.xi2);
        v
    }

    pub fn from_vec(n: usize, v: &[f64]) -> Result<Self> {
        if v.len() != 2 + 2 * n {
            return Err(Error::DimensionMismatch {
                expected: 2 + 2 * n,
                got: v.len(),
            });
        }
        Ok(ReducedPoint {
            lambda1: v[0],
            lambda2: v[1],
            xi1: v[2..2 + n].to_vec(),
            xi2: v[2 + n..2 + 2 * n].to_vec(),
        })
    }
}

/// The reduced map with its model data resolved (ϖ’s cached).
pub struct TMap {
    pub n: usize,
    pub ell: u32,
    pub w1: f64,
    pub w2: f64,
    pub gamma: f64,
    pub q2: Vec<f64>,
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
}

impl TMap {
    pub fn new(model: &TwinPeakModel, k: &ReductionConstants) -> Result<Self> {
        if model.n != k.n {
            return Err(Error::DimensionMismatch {
                expected: k.n,
                got: model.n,
            });
        }
        Ok(TMap {
            n: model.n,
            ell: model.ell,
            w1: model.varpi(1)?,
            w2: model.varpi(2)?,
            gamma: model.gamma,
            q2: model.q2.clone(),
            c1: k.c1,
            c2: k.c2,
            c3: k.c3,
        })
    }

    fn interaction_terms(&self, lambda1: f64, lambda2: f64) -> (f64, f64) {
        let nf = self.n as f64;
        let prod = lambda1 * lambda2;
        let g = prod.powf((nf - 2.0) / 2.0) / self.gamma.powf(nf - 2.0);
        let gg = prod.powf(nf / 2.0) / self.gamma.powf(nf);
        (g, gg)
    }

    /// T(P) in the flat layout [T₁ₒ, T₂ₒ, T₁₁…T₁ₙ, T₂₁…T₂ₙ].
    pub fn eval(&self, p: &ReducedPoint) -> Vec<f64> {
        let n = self.n;
        let ell = self.ell as i32;
        let (g, gg) = self.interaction_terms(p.lambda1, p.lambda2);
        let mut t = Vec::with_capacity(2 + 2 * n);
        t.push(self.c1 * self.w1.abs() * p.lambda1.powi(ell) - g);
        t.push(self.c1 * self.w2.abs() * p.lambda2.powi(ell) - g);
        for j in 0..n {
            t.push(
                self.c2 * self.w1 * p.lambda1.powi(ell - 1) * p.xi1[j]
                    + self.c3 / p.lambda2 * gg * (p.xi1[j] - p.xi2[j]),
            );
        }
        for j in 0..n {
            t.push(
                self.c2 * self.w2 * p.lambda2.powi(ell - 1) * (p.xi2[j] - self.q2[j])
                    + self.c3 / p.lambda1 * gg * (p.xi2[j] - p.xi1[j]),
            );
        }
        t
    }

    /// Componentwise magnitude of the terms entering T, for relative
    /// residual checks: the sum of |term| per component.
    pub fn component_scales(&self, p: &ReducedPoint) -> Vec<f64> {
        let n = self.n;
        let ell = self.ell as i32;
        let (g, gg) = self.interaction_terms(p.lambda1, p.lambda2);
        let mut s = Vec::with_capacity(2 + 2 * n);
        s.push(self.c1 * self.w1.abs() * p.lambda1.powi(ell) + g);
        s.push(self.c1 * self.w2.abs() * p.lambda2.powi(ell) + g);
        for j in 0..n {
            s.push(
                (self.c2 * self.w1 * p.lambda1.powi(ell - 1) * p.xi1[j]).abs()
                    + (self.c3 / p.lambda2 * gg).abs()
                        * (p.xi1[j].abs() + p.xi2[j].abs() + self.q2[j].abs()),
            );
        }
        for j in 0..n {
            s.push(
                (self.c2 * self.w2 * p.lambda2.powi(ell - 1)).abs()
                    * (p.xi2[j].abs() + self.q2[j].abs())
                    + (self.c3 / p.lambda1 * gg).abs()
                        * (p.xi2[j].abs() + p.xi1[j].abs() + self.q2[j].abs()),
            );
        }
        s
    }

    /// Analytic Jacobian ∂T/∂(λ₁, λ₂, ξ₁, ξ₂) at `p`.
    pub fn jacobian(&self, p: &ReducedPoint) -> DMatrix<f64> {
        let n = self.n;
        let nf = n as f64;
        let ell = self.ell as i32;
        let dim = 2 + 2 * n;
        let (l1, l2) = (p.lambda1, p.lambda2);
        let (g, gg) = self.interaction_terms(l1, l2);
        let mut jac = DMatrix::zeros(dim, dim);

        // ∂g/∂λₖ = ((n−2)/2)·g/λₖ, ∂gg/∂λₖ = (n/2)·gg/λₖ
        let dg_l1 = (nf - 2.0) / 2.0 * g / l1;
        let dg_l2 = (nf - 2.0) / 2.0 * g / l2;
        let dgg_l1 = nf / 2.0 * gg / l1;
        let dgg_l2 = nf / 2.0 * gg / l2;

        jac[(0, 0)] = self.c1 * self.w1.abs() * ell as f64 * l1.powi(ell - 1) - dg_l1;
        jac[(0, 1)] = -dg_l2;
        jac[(1, 0)] = -dg_l1;
        jac[(1, 1)] = self.c1 * self.w2.abs() * ell as f64 * l2.powi(ell - 1) - dg_l2;

        for j in 0..n {
            let row = 2 + j;
            let diff = p.xi1[j] - p.xi2[j];
            jac[(row, 0)] = self.c2 * self.w1 * (ell - 1) as f64 * l1.powi(ell - 2) * p.xi1[j]
                + self.c3 / l2 * dgg_l1 * diff;
            jac[(row, 1)] = self.c3 * diff * (dgg_l2 / l2 - gg / (l2 * l2));
            jac[(row, 2 + j)] = self.c2 * self.w1 * l1.powi(ell - 1) + self.c3 / l2 * gg;
            jac[(row, 2 + n + j)] = -self.c3 / l2 * gg;
        }
        for j in 0..n {
            let row = 2 + n + j;
            let diff = p.xi2[j] - p.xi1[j];
            jac[(row, 1)] = self.c2 * self.w2 * (ell - 1) as f64 * l2.powi(ell - 2)
                * (p.xi2[j] - self.q2[j])
                + self.c3 / l1 * dgg_l2 * diff;
            jac[(row, 0)] = self.c3 * diff * (dgg_l1 / l1 - gg / (l1 * l1));
            jac[(row, 2 + n + j)] = self.c2 * self.w2 * l2.powi(ell - 1) + self.c3 / l1 * gg;
            jac[(row, 2 + j)] = -self.c3 / l1 * gg;
        }
        jac
    }

    /// The scale ratio α = (ϖ₁/ϖ₂)^{1/ℓ} between the two concentration rates.
    pub fn alpha(&self) -> Result<f64> {
        if self.w2 == 0.0 {
            return Err(Error::ZeroVarpi);
        }
        Ok((self.w1 / self.w2).powf(1.0 / self.ell as f64))
    }

    /// Closed-form root P_τ of T = 0.
    pub fn solve_tau(&self) -> Result<ReducedPoint> {
        let n = self.n;
        let nf = n as f64;
        let ell = self.ell as f64;
        if (nf - 2.0 - ell).abs() < 1e-12 {
            return Err(Error::InvalidFlatness { ell: self.ell, n });
        }
        let alpha = self.alpha()?;
        let lambda1 = (self.gamma.powf(nf - 2.0) * self.c1 * self.w1.abs()
            / alpha.powf((nf - 2.0) / 2.0))
        .powf(1.0 / (nf - 2.0 - ell));
        let lambda2 = alpha * lambda1;
        // β = 1/α² makes the two translation rows proportional, so the
        // scalar solve below clears both at once.
        let beta = 1.0 / (alpha * alpha);
        let (_, gg) = self.interaction_terms(lambda1, lambda2);
        let coupling = self.c3 / lambda2 * gg;
        let denom = self.c2 * self.w1 * lambda1.powf(ell - 1.0) + coupling * (1.0 + 1.0 / beta);
        let mut xi1 = vec![0.0; n];
        let mut xi2 = vec![0.0; n];
        for j in 0..n {
            xi1[j] = coupling * self.q2[j] / denom;
            xi2[j] = self.q2[j] - xi1[j] / beta;
        }
        Ok(ReducedPoint {
            lambda1,
            lambda2,
            xi1,
            xi2,
        })
    }
}

/// T(P) for a model and constants (convenience wrapper over [`TMap`]).
pub fn t_map(p: &ReducedPoint, model: &TwinPeakModel, k: &ReductionConstants) -> Result<Vec<f64>> {
    Ok(TMap::new(model, k)?.eval(p))
}

/// Closed-form root of the reduced map.
pub fn solve_tau(model: &TwinPeakModel, k: &ReductionConstants) -> Result<ReducedPoint> {
    TMap::new(model, k)?.solve_tau()
}

/// Analytic Jacobian of the reduced map at `p`.
pub fn jacobian(
    p: &ReducedPoint,
    model: &TwinPeakModel,
    k: &ReductionConstants,
) -> Result<DMatrix<f64>> {
    Ok(TMap::new(model, k)?.jacobian(p))
}

/// Sign of det(∂T/∂P) at the root P_τ; the construction requires −1.
///
/// Computed on the row-equilibrated Jacobian so the λ^{ℓ−1} row scales
/// cannot drive the determinant under the floating-point floor.
pub fn det_sign_at_tau(model: &TwinPeakModel, k: &ReductionConstants) -> Result<i8> {
    let tm = TMap::new(model, k)?;
    let p_tau = tm.solve_tau()?;
    let (sign, _) = degree::equilibrated_det_sign(&tm.jacobian(&p_tau));
    Ok(sign)
}

/// C̄_b⁺·T(P): the leading-order model of the coupled quasi-hyperbolic
/// gradient (λ·∇)I_R of the reduced functional.
pub fn reduced_gradient_model(
    p: &ReducedPoint,
    model: &TwinPeakModel,
    k: &ReductionConstants,
) -> Result<Vec<f64>> {
    Ok(t_map(p, model, k)?.into_iter().map(|t| k.cb * t).collect())
}

/// Admissible gap so that the root satisfies D_τ ≥ `d_threshold`:
///
///   γ_o = √α · (C₁⁺|ϖ₁|)^{−1/ℓ} · D̄^{−((n−2)−ℓ)/ℓ},
///
/// the exact inversion of D_τ(γ) = D̄ through the closed form of P_τ.
pub fn gamma_o_estimate(
    model: &TwinPeakModel,
    k: &ReductionConstants,
    d_threshold: f64,
) -> Result<f64> {
    let tm = TMap::new(model, k)?;
    let nf = tm.n as f64;
    let ell = tm.ell as f64;
    let alpha = tm.alpha()?;
    let e = nf - 2.0 - ell;
    if e <= 0.0 {
        return Err(Error::InvalidFlatness {
            ell: tm.ell,
            n: tm.n,
        });
    }
    Ok(alpha.sqrt() * (tm.c1 * tm.w1.abs()).powf(-1.0 / ell) * d_threshold.powf(-e / ell))
}

/// D_τ = γ/√(λ₁τλ₂τ) at the closed-form root.
pub fn d_tau(model: &TwinPeakModel, k: &ReductionConstants) -> Result<f64> {
    let tm = TMap::new(model, k)?;
    let p = tm.solve_tau()?;
    Ok(tm.gamma / (p.lambda1 * p.lambda2).sqrt())
}
