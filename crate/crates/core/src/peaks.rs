//! Twin pseudo-peak model of the prescribed function.
//!
//! The model describes c̃ₙK = n(n−2) + H near two close critical points
//! q₁ = 0 and q₂ (|q₂| = γ): inside each ball B_{qⱼ}(ρ), ρ = ℏγ,
//! H(y) = Pⱼ(y − qⱼ) + rⱼ(y − qⱼ),
//! with Pⱼ a homogeneous polynomial of even degree ℓ (the flatness) and rⱼ a
//! remainder bounded by C_{Rⱼ}|y − qⱼ|^{ℓ+1}.  Outside the balls H is closed
//! off smoothly: each local expansion is multiplied by an exp(−1/t) cutoff
//! equal to 1 on B_{qⱼ}(ρ/2) and 0 outside B_{qⱼ}(ρ), which keeps every
//! asserted bound exact where it is asserted and |K| globally bounded.

use serde::{Deserialize, Serialize};

use crate::bubble::dist_sq;
use crate::polyalg::HomogeneousPoly;
use crate::{Error, Result};

/// c̃ₙ = (n−2)/(4(n−1)), the conformal normalization of the equation.
pub fn c_tilde(n: usize) -> f64 {
    (n as f64 - 2.0) / (4.0 * (n as f64 - 1.0))
}

/// Remainder model for the Taylor tail beyond the peak polynomial.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum RemainderModel {
    /// r ≡ 0: the expansion is exactly the peak polynomial.
    Zero,
    /// r(ȳ) = c·|ȳ|^{ℓ+1}, the extreme case saturating the C_R bound at |c|.
    Power { c: f64 },
}

impl RemainderModel {
    fn eval(&self, r: f64, ell: u32) -> f64 {
        match self {
            RemainderModel::Zero => 0.0,
            RemainderModel::Power { c } => c * r.powi(ell as i32 + 1),
        }
    }

    fn coeff_abs(&self) -> f64 {
        match self {
            RemainderModel::Zero => 0.0,
            RemainderModel::Power { c } => c.abs(),
        }
    }
}

/// A violated model hypothesis, tagged with the condition it breaks.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    /// Tag of the violated condition, e.g. "(1.13)".
    pub condition: String,
    pub message: String,
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} {}", self.condition, self.message)
    }
}

/// Full description of the prescribed function near its twin pseudo-peaks.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TwinPeakModel {
    pub n: usize,
    /// Flatness ℓ (even, 2 ≤ ℓ < n−2).
    pub ell: u32,
    /// Peak gap γ = |q₂|.
    pub gamma: f64,
    /// Second peak location (the first peak sits at the origin).
    pub q2: Vec<f64>,
    pub p1: HomogeneousPoly,
    pub p2: HomogeneousPoly,
    /// Ball-radius fraction: ρ = ℏ·γ with ℏ ∈ (0, 1/2).
    pub hbar: f64,
    pub r1: RemainderModel,
    pub r2: RemainderModel,
    /// Remainder bound constants of the Taylor tails.
    pub cr1: f64,
    pub cr2: f64,
    /// Polynomial bound constants: |H| ≤ C_{Pⱼ}|y−qⱼ|^ℓ on each ball.
    pub cp1: f64,
    pub cp2: f64,
    /// Symmetry constant comparing |ϖ₁| and |ϖ₂|.
    pub cp_sym: f64,
    /// Lower-bound constant: ϖ₁ ≥ −C_ω.
    pub c_omega: f64,
    /// Global bound on |K|.
    pub cb: f64,
}

impl TwinPeakModel {
    /// Symmetric model with P₁ = P₂ = −(y₁²+⋯+yₙ²)^{ℓ/2} and q₂ = γ·e₁,
    /// remainders zero and all bound constants chosen consistently.
    pub fn symmetric(n: usize, ell: u32, gamma: f64) -> Result<Self> {
        let p = HomogeneousPoly::radial(n, ell)?.scale(-1.0);
        Self::twin(n, ell, gamma, p.clone(), p)
    }

    /// Model with given peak polynomials, q₂ = γ·e₁, zero remainders and
    /// bound constants derived from the data.
    pub fn twin(
        n: usize,
        ell: u32,
        gamma: f64,
        p1: HomogeneousPoly,
        p2: HomogeneousPoly,
    ) -> Result<Self> {
        if gamma <= 0.0 {
            return Err(Error::Invalid(format!("gamma must be positive, got {gamma}")));
        }
        let mut q2 = vec![0.0; n];
        q2[0] = gamma;
        let w1 = p1.iterated_laplacian_value()?;
        let w2 = p2.iterated_laplacian_value()?;
        let ratio = if w1 != 0.0 && w2 != 0.0 {
            (w2 / w1).abs().max((w1 / w2).abs())
        } else {
            1.0
        };
        let n_f = n as f64;
        let cp1 = p1.coeff_abs_sum();
        let cp2 = p2.coeff_abs_sum();
        let sup_h = (cp1.max(cp2)) * (0.25 * gamma).powi(ell as i32);
        Ok(TwinPeakModel {
            n,
            ell,
            gamma,
            q2,
            p1,
            p2,
            hbar: 0.25,
            r1: RemainderModel::Zero,
            r2: RemainderModel::Zero,
            cr1: 0.0,
            cr2: 0.0,
            cp1,
            cp2,
            cp_sym: 1.1 * ratio,
            c_omega: 1.1 * w1.abs().max(w2.abs()),
            cb: (n_f * (n_f - 2.0) + 1.1 * sup_h) / c_tilde(n),
        })
    }

    /// ρ = ℏ·γ, the radius of the peak balls.
    pub fn rho(&self) -> f64 {
        self.hbar * self.gamma
    }

    /// ϖⱼ = Δ^{(ℓ/2)} Pⱼ for j ∈ {1, 2}.
    pub fn varpi(&self, j: usize) -> Result<f64> {
        match j {
            1 => self.p1.iterated_laplacian_value(),
            2 => self.p2.iterated_laplacian_value(),
            _ => Err(Error::Invalid(format!("peak index must be 1 or 2, got {j}"))),
        }
    }

    /// Smooth step built from exp(−1/t): 0 for t ≤ 0, 1 for t ≥ 1.
    fn smooth_step(t: f64) -> f64 {
        if t <= 0.0 {
            0.0
        } else if t >= 1.0 {
            1.0
        } else {
            let g = (-1.0 / t).exp();
            let g1 = (-1.0 / (1.0 - t)).exp();
            g / (g + g1)
        }
    }

    /// Cutoff equal to 1 on B(0, ρ/2) and 0 outside B(0, ρ), as a function
    /// of the distance `r` from the peak.
    fn cutoff(&self, r: f64) -> f64 {
        let rho = self.rho();
        Self::smooth_step(2.0 * (rho - r) / rho)
    }

    /// H̃ = c̃ₙK − n(n−2) at `y`: the local expansions glued by the cutoffs.
    pub fn h_eval(&self, y: &[f64]) -> Result<f64> {
        if y.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: y.len(),
            });
        }
        let mut h = 0.0;
        let rho = self.rho();
        let r1 = dist_sq(y, &vec![0.0; self.n]).sqrt();
        if r1 < rho {
            let local = self.p1.evaluate(y)? + self.r1.eval(r1, self.ell);
            h += self.cutoff(r1) * local;
        }
        let r2 = dist_sq(y, &self.q2).sqrt();
        if r2 < rho {
            let ybar: Vec<f64> = y.iter().zip(&self.q2).map(|(a, b)| a - b).collect();
            let local = self.p2.evaluate(&ybar)? + self.r2.eval(r2, self.ell);
            h += self.cutoff(r2) * local;
        }
        Ok(h)
    }

    /// K(y) = (n(n−2) + H̃(y))/c̃ₙ.
    pub fn k_eval(&self, y: &[f64]) -> Result<f64> {
        let n = self.n as f64;
        Ok((n * (n - 2.0) + self.h_eval(y)?) / c_tilde(self.n))
    }

    /// Checks every model hypothesis; an empty list means the model is valid.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let mut push = |condition: &str, message: String| {
            out.push(Violation {
                condition: condition.to_string(),
                message,
            });
        };

        if !(6 <= self.n && self.n < 10) {
            push(
                "(1.16)",
                format!("dimension restriction 6 ≤ n < 10 fails: n = {}", self.n),
            );
        }
        if self.ell % 2 != 0 || self.ell < 2 || self.ell as i64 >= self.n as i64 - 2 {
            push(
                "(1.17)",
                format!(
                    "flatness must be even with ℓ ∈ [2, n−2): ℓ = {}, n = {}",
                    self.ell, self.n
                ),
            );
        }
        if !(self.hbar > 0.0 && self.hbar < 0.5) {
            push("(1.9)(i)", format!("ℏ must lie in (0, 1/2): ℏ = {}", self.hbar));
        }
        if self.gamma <= 0.0 {
            push("(1.5)", format!("peak gap must be positive: γ = {}", self.gamma));
        }
        let q2_norm = dist_sq(&self.q2, &vec![0.0; self.q2.len()]).sqrt();
        if (q2_norm - self.gamma).abs() > 1e-12 * self.gamma.max(1.0) {
            push(
                "(1.5)",
                format!("γ must equal |q₂|: γ = {}, |q₂| = {}", self.gamma, q2_norm),
            );
        }
        for (j, p) in [(1usize, &self.p1), (2usize, &self.p2)] {
            if p.dimension() != self.n {
                push(
                    "(1.9)(ii)",
                    format!("P{j} lives in dimension {}, expected {}", p.dimension(), self.n),
                );
            }
            if p.degree() != self.ell {
                push(
                    "(1.9)(ii)",
                    format!("P{j} has degree {}, expected ℓ = {}", p.degree(), self.ell),
                );
            }
        }
        match (self.varpi(1), self.varpi(2)) {
            (Ok(w1), Ok(w2)) => {
                if w1 >= 0.0 {
                    push("(1.13)", format!("ϖ₁ must be negative: ϖ₁ = {w1}"));
                }
                if w2 >= 0.0 {
                    push("(1.13)", format!("ϖ₂ must be negative: ϖ₂ = {w2}"));
                }
                if w1 != 0.0 && w2 != 0.0 {
                    let (a1, a2) = (w1.abs(), w2.abs());
                    if a2 > self.cp_sym * a1 || a2 < a1 / self.cp_sym {
                        push(
                            "(1.14)",
                            format!(
                                "|ϖ₂| = {a2} outside [|ϖ₁|/C_p, C_p·|ϖ₁|] = [{}, {}]",
                                a1 / self.cp_sym,
                                self.cp_sym * a1
                            ),
                        );
                    }
                }
                if w1 < -self.c_omega {
                    push("(1.15)", format!("ϖ₁ = {w1} below −C_ω = {}", -self.c_omega));
                }
            }
            _ => push("(1.12)", "iterated Laplacian undefined (odd flatness?)".to_string()),
        }
        if self.r1.coeff_abs() > self.cr1 {
            push(
                "(1.10)",
                format!("remainder 1 coefficient {} exceeds C_R1 = {}", self.r1.coeff_abs(), self.cr1),
            );
        }
        if self.r2.coeff_abs() > self.cr2 {
            push(
                "(1.10)",
                format!("remainder 2 coefficient {} exceeds C_R2 = {}", self.r2.coeff_abs(), self.cr2),
            );
        }
        // |H| ≤ C_{Pj}|ȳ|^ℓ on the ball needs Σ|coeffs| + C_{Rj}·ρ ≤ C_{Pj}.
        let rho = self.rho();
        for (j, p, r, cp) in [
            (1usize, &self.p1, &self.r1, self.cp1),
            (2usize, &self.p2, &self.r2, self.cp2),
        ] {
            let need = p.coeff_abs_sum() + r.coeff_abs() * rho;
            if need > cp * (1.0 + 1e-12) {
                push(
                    "(1.11)",
                    format!("peak {j}: coefficient mass {need} exceeds C_P{j} = {cp}"),
                );
            }
        }
        // Global bound: |K| ≤ (n(n−2) + sup|H|)/c̃ₙ must not exceed C̄_b.
        let n_f = self.n as f64;
        let sup_h = self.cp1.max(self.cp2) * rho.powi(self.ell as i32);
        let k_bound = (n_f * (n_f - 2.0) + sup_h) / c_tilde(self.n);
        if k_bound > self.cb * (1.0 + 1e-12) {
            push(
                "(1.18)",
                format!("implied sup|K| = {k_bound} exceeds the declared bound C̄_b = {}", self.cb),
            );
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn symmetric_model_is_valid() {
        let m = TwinPeakModel::symmetric(6, 2, 0.1).unwrap();
        assert!(m.validate().is_empty(), "{:?}", m.validate());
        assert_relative_eq!(m.varpi(1).unwrap(), -12.0);
    }

    #[test]
    fn sign_flip_violates_pseudo_peak_condition() {
        let mut m = TwinPeakModel::symmetric(6, 2, 0.1).unwrap();
        m.p1 = m.p1.scale(-1.0); // +|y|²
        let v = m.validate();
        assert!(v.iter().any(|v| v.condition == "(1.13)"), "{v:?}");
    }

    #[test]
    fn flatness_boundary_excluded() {
        // ℓ = n − 2 is excluded by the half-open interval [2, n−2).
        let m = TwinPeakModel::symmetric(6, 4, 0.1);
        let v = m.unwrap().validate();
        assert!(v.iter().any(|v| v.condition == "(1.17)"), "{v:?}");
    }

    #[test]
    fn h_vanishes_at_both_peaks() {
        let m = TwinPeakModel::symmetric(6, 2, 0.2).unwrap();
        assert_eq!(m.h_eval(&vec![0.0; 6]).unwrap(), 0.0);
        assert_eq!(m.h_eval(&m.q2.clone()).unwrap(), 0.0);
    }

    #[test]
    fn h_matches_polynomial_in_inner_ball() {
        // With zero remainder, c̃ₙK − n(n−2) − Pⱼ(y − qⱼ) = 0 on B(qⱼ, ρ/2).
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let m = TwinPeakModel::symmetric(6, 2, 0.4).unwrap();
        let rho = m.rho();
        for _ in 0..300 {
            let dir: Vec<f64> = (0..6).map(|_| rng.random_range(-1.0..1.0)).collect();
            let norm = dir.iter().map(|x| x * x).sum::<f64>().sqrt();
            let r = rng.random_range(0.0..0.49 * rho);
            let y: Vec<f64> = dir.iter().map(|x| x / norm * r).collect();
            let h = m.h_eval(&y).unwrap();
            let p = m.p1.evaluate(&y).unwrap();
            assert_relative_eq!(h, p, max_relative = 1e-14, epsilon = 1e-300);
            let y2: Vec<f64> = y.iter().zip(&m.q2).map(|(a, b)| a + b).collect();
            let h2 = m.h_eval(&y2).unwrap();
            assert_relative_eq!(h2, p, max_relative = 1e-12, epsilon = 1e-16);
        }
    }

    #[test]
    fn h_bounded_by_cp_on_ball() {
        let mut rng = ChaCha8Rng::seed_from_u64(22);
        let m = TwinPeakModel::symmetric(7, 2, 0.3).unwrap();
        let rho = m.rho();
        for _ in 0..1000 {
            let dir: Vec<f64> = (0..7).map(|_| rng.random_range(-1.0..1.0)).collect();
            let norm = dir.iter().map(|x| x * x).sum::<f64>().sqrt();
            let r = rng.random_range(0.0..rho);
            let y: Vec<f64> = dir.iter().map(|x| x / norm * r).collect();
            let h = m.h_eval(&y).unwrap().abs();
            assert!(
                h <= m.cp1 * r.powi(m.ell as i32) * (1.0 + 1e-12),
                "|H| = {h} exceeds C_P1·|y|^ℓ at r = {r}"
            );
        }
    }

    #[test]
    fn h_vanishes_outside_balls() {
        let m = TwinPeakModel::symmetric(6, 2, 0.2).unwrap();
        let mut y = vec![0.0; 6];
        y[1] = 0.11; // > ρ = 0.05 from both peaks
        assert_eq!(m.h_eval(&y).unwrap(), 0.0);
        let n = 6.0;
        assert_relative_eq!(
            m.k_eval(&y).unwrap(),
            n * (n - 2.0) / c_tilde(6),
            max_relative = 1e-14
        );
    }

    #[test]
    fn remainder_model_respects_bound() {
        let mut m = TwinPeakModel::symmetric(6, 2, 0.2).unwrap();
        m.r1 = RemainderModel::Power { c: 0.5 };
        m.cr1 = 0.5;
        m.cp1 += 0.5 * m.rho();
        // |r₁| ≤ C_R1·|y|^{ℓ+1} with C_R1 = |c| is tight by construction.
        assert!(m.validate().is_empty(), "{:?}", m.validate());
        m.cr1 = 0.4;
        assert!(m.validate().iter().any(|v| v.condition == "(1.10)"));
    }

    #[test]
    fn varpi_with_quartic_peaks() {
        // Δ²(−y₁⁴ − y₂⁴) = −24 − 24 = −48.
        let p = HomogeneousPoly::from_terms(
            7,
            4,
            &[(vec![4, 0, 0, 0, 0, 0, 0], -1.0), (vec![0, 4, 0, 0, 0, 0, 0], -1.0)],
        )
        .unwrap();
        let m = TwinPeakModel::twin(7, 4, 0.1, p.clone(), p).unwrap();
        assert_eq!(m.varpi(1).unwrap(), -48.0);
        assert!(m.validate().is_empty(), "{:?}", m.validate());
    }

    #[test]
    fn all_odd_monomials_give_zero_varpi_and_fail_validation() {
        let p = HomogeneousPoly::monomial(6, vec![1, 1, 0, 0, 0, 0], 1.0).unwrap();
        let m = TwinPeakModel::twin(6, 2, 0.1, p.clone(), p).unwrap();
        assert_eq!(m.varpi(1).unwrap(), 0.0);
        assert!(m.validate().iter().any(|v| v.condition == "(1.13)"));
    }

    #[test]
    fn cutoff_is_smooth_step() {
        let m = TwinPeakModel::symmetric(6, 2, 1.0).unwrap();
        let rho = m.rho();
        assert_eq!(m.cutoff(0.0), 1.0);
        assert_eq!(m.cutoff(0.5 * rho), 1.0);
        assert_eq!(m.cutoff(rho), 0.0);
        assert_eq!(m.cutoff(2.0 * rho), 0.0);
        let mid = m.cutoff(0.75 * rho);
        assert!(mid > 0.0 && mid < 1.0);
    }
}
