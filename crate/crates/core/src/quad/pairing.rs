//! Two-bubble interaction integrals and the weak-interaction proxy.
//!
//! The first-variation pairing against a kernel direction φ is
//! ⟨I′(z_σ), φ⟩ = n(n−2)·∫𝓘·φ with 𝓘 = (V₁^p + V₂^p) − (V₁+V₂)^p < 0
//! and p = (n+2)/(n−2).  Everything here is axially symmetric around the
//! line through the two centers, so the integrals collapse to the 2-D
//! cylindrical grid.

use super::grid2d::integrate_with_error;
use super::{j_moment_half, IntegralEstimate, Method};
use crate::bubble::BubbleConfig;
use crate::{Error, Result};

/// Stable (V₁^p + V₂^p) − (V₁+V₂)^p for positive arguments:
/// hi^p·(r^p − expm1(p·ln(1+r))) with r = lo/hi, exact as r → 0.
fn bracket(v1: f64, v2: f64, p: f64) -> f64 {
    let (hi, lo) = if v1 >= v2 { (v1, v2) } else { (v2, v1) };
    if hi == 0.0 {
        return 0.0;
    }
    let r = lo / hi;
    hi.powf(p) * (r.powf(p) - (p * r.ln_1p()).exp_m1())
}

/// Axis geometry of a two-bubble configuration: separation δ and unit axis
/// e = (ξ₂ − ξ₁)/δ (e = e₁ when the centers coincide).
fn axis(cfg: &BubbleConfig) -> (f64, Vec<f64>) {
    let n = cfg.n();
    let mut e: Vec<f64> = cfg
        .b2
        .xi
        .iter()
        .zip(&cfg.b1.xi)
        .map(|(a, b)| a - b)
        .collect();
    let delta = e.iter().map(|x| x * x).sum::<f64>().sqrt();
    if delta > 0.0 {
        for x in &mut e {
            *x /= delta;
        }
    } else {
        e = vec![0.0; n];
        e[0] = 1.0;
    }
    (delta, e)
}

/// True when the configuration is within the comparability window the
/// asymptotic estimates assume: λ₁ ≍ λ₂ and centers close to the peaks.
pub fn comparability_ok(cfg: &BubbleConfig) -> bool {
    let ratio = cfg.b1.lambda / cfg.b2.lambda;
    let lam = cfg.lambda();
    let xi1_norm = cfg.b1.xi.iter().map(|x| x * x).sum::<f64>().sqrt();
    let (delta, _) = axis(cfg);
    ratio < 10.0 && ratio > 0.1 && xi1_norm <= lam && (delta - cfg.gamma).abs() <= 2.0 * lam
}

/// S(λ₁,λ₂;ξ₁,ξ₂;P,Q) = ∫ (λ₁/(λ₁²+|y−ξ₁|²))^P (λ₂/(λ₂²+|y−ξ₂|²))^Q dy,
/// for positive exponents with P + Q = n, by cylindrical quadrature.
pub fn interaction_s(cfg: &BubbleConfig, p_exp: f64, q_exp: f64) -> Result<IntegralEstimate> {
    let n = cfg.n();
    if p_exp <= 0.0 || q_exp <= 0.0 || (p_exp + q_exp - n as f64).abs() > 1e-9 {
        return Err(Error::ExponentSum {
            p: p_exp,
            q: q_exp,
            n,
        });
    }
    let (l1, l2) = (cfg.b1.lambda, cfg.b2.lambda);
    let (delta, _) = axis(cfg);
    let (value, abs_error, nodes) = integrate_with_error(n, l1, l2, delta, |s, t| {
        let d1 = l1 * l1 + s * s + t * t;
        let d2 = l2 * l2 + (s - delta) * (s - delta) + t * t;
        (l1 / d1).powf(p_exp) * (l2 / d2).powf(q_exp)
    });
    Ok(IntegralEstimate {
        value,
        abs_error,
        method: Method::Quad2d,
        samples_or_nodes: nodes,
        seed: None,
    })
}

/// Kernel direction of the pairing: concentration or translation mode of
/// one of the two bubbles.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    DLambda1,
    DLambda2,
    /// ∂/∂ξ_{1,j}; the index is the coordinate j (0-based).
    DXi1(usize),
    DXi2(usize),
}

impl Direction {
    /// All 2(n+1) coordinate directions.
    pub fn all(n: usize) -> Vec<Direction> {
        let mut v = vec![Direction::DLambda1, Direction::DLambda2];
        v.extend((0..n).map(Direction::DXi1));
        v.extend((0..n).map(Direction::DXi2));
        v
    }
}

/// ∂V/∂λ as a function of the squared distance to the center.
fn dlambda_kernel(n: f64, lam: f64, r2: f64) -> f64 {
    -((n - 2.0) / 2.0) * lam.powf((n - 4.0) / 2.0) * (lam * lam - r2)
        / (lam * lam + r2).powf(n / 2.0)
}

fn bubble_profile(lam: f64, r2: f64, n: f64) -> f64 {
    (lam / (lam * lam + r2)).powf((n - 2.0) / 2.0)
}

/// Pairing n(n−2)∫𝓘·(∂V) for the axial ξ-scalar of one bubble.
///
/// The transverse part of ∂_{ξⱼ}V integrates to zero by symmetry; what is
/// left is e_j times this axial integral, so it is the whole content of the
/// 2n translation pairings.
pub fn io_prime_pairing_axial(cfg: &BubbleConfig, which: usize) -> IntegralEstimate {
    let n = cfg.n();
    let nf = n as f64;
    let p = (nf + 2.0) / (nf - 2.0);
    let (l1, l2) = (cfg.b1.lambda, cfg.b2.lambda);
    let (delta, _) = axis(cfg);
    let (value, abs_error, nodes) = integrate_with_error(n, l1, l2, delta, |s, t| {
        let r1sq = s * s + t * t;
        let r2sq = (s - delta) * (s - delta) + t * t;
        let v1 = bubble_profile(l1, r1sq, nf);
        let v2 = bubble_profile(l2, r2sq, nf);
        let i_bracket = bracket(v1, v2, p);
        let g = if which == 1 {
            (nf - 2.0) * l1.powf((nf - 2.0) / 2.0) * s / (l1 * l1 + r1sq).powf(nf / 2.0)
        } else {
            (nf - 2.0) * l2.powf((nf - 2.0) / 2.0) * (s - delta)
                / (l2 * l2 + r2sq).powf(nf / 2.0)
        };
        i_bracket * g
    });
    IntegralEstimate {
        value: nf * (nf - 2.0) * value,
        abs_error: nf * (nf - 2.0) * abs_error,
        method: Method::Quad2d,
        samples_or_nodes: nodes,
        seed: None,
    }
}

/// The pairing n(n−2)∫𝓘·(∂V) in one coordinate direction.
pub fn io_prime_pairing(cfg: &BubbleConfig, dir: Direction) -> IntegralEstimate {
    let n = cfg.n();
    let nf = n as f64;
    let p = (nf + 2.0) / (nf - 2.0);
    let (l1, l2) = (cfg.b1.lambda, cfg.b2.lambda);
    let (delta, e) = axis(cfg);
    match dir {
        Direction::DLambda1 | Direction::DLambda2 => {
            let (value, abs_error, nodes) = integrate_with_error(n, l1, l2, delta, |s, t| {
                let r1sq = s * s + t * t;
                let r2sq = (s - delta) * (s - delta) + t * t;
                let v1 = bubble_profile(l1, r1sq, nf);
                let v2 = bubble_profile(l2, r2sq, nf);
                let i_bracket = bracket(v1, v2, p);
                let g = if dir == Direction::DLambda1 {
                    dlambda_kernel(nf, l1, r1sq)
                } else {
                    dlambda_kernel(nf, l2, r2sq)
                };
                i_bracket * g
            });
            IntegralEstimate {
                value: nf * (nf - 2.0) * value,
                abs_error: nf * (nf - 2.0) * abs_error,
                method: Method::Quad2d,
                samples_or_nodes: nodes,
                seed: None,
            }
        }
        Direction::DXi1(j) => {
            let mut est = io_prime_pairing_axial(cfg, 1);
            est.value *= e[j];
            est.abs_error *= e[j].abs().max(1e-3);
            est
        }
        Direction::DXi2(j) => {
            let mut est = io_prime_pairing_axial(cfg, 2);
            est.value *= e[j];
            est.abs_error *= e[j].abs().max(1e-3);
            est
        }
    }
}

/// ‖∇(∂V/∂λ)‖_{L²} for a bubble of scale λ in dimension n.
///
/// Uses Δ(∂V) = −n(n+2)V^{4/(n−2)}·∂V and integration by parts, which turns
/// the norm into exact reference moments at power n+2.
pub fn grad_norm_dlambda(n: usize, lam: f64) -> f64 {
    let nf = n as f64;
    let two_p = 2 * (n as i64 + 2);
    let m0 = j_moment_half(n, 0, two_p).unwrap();
    let m1 = nf * j_moment_half(n, 1, two_p).unwrap();
    let m2 = nf * (nf + 2.0) * j_moment_half(n, 2, two_p).unwrap();
    let c = nf * (nf + 2.0) * ((nf - 2.0) / 2.0).powi(2) * (m0 - 2.0 * m1 + m2);
    c.sqrt() / lam
}

/// ‖∇(∂V/∂ξⱼ)‖_{L²} for a bubble of scale λ in dimension n.
pub fn grad_norm_dxi(n: usize, lam: f64) -> f64 {
    let nf = n as f64;
    let two_p = 2 * (n as i64 + 2);
    let c = nf * (nf + 2.0) * (nf - 2.0).powi(2) * j_moment_half(n, 1, two_p).unwrap();
    c.sqrt() / lam
}

/// Maximum of |⟨I′(z_σ), φ⟩|/‖φ‖_∇ over the 2(n+1) kernel directions φ:
/// a computable proxy for the operator norm restricted to the approximate
/// kernel.
pub fn weak_interaction_norm_proxy(cfg: &BubbleConfig) -> f64 {
    let n = cfg.n();
    let (_, e) = axis(cfg);
    let e_max = e.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let p_l1 = io_prime_pairing(cfg, Direction::DLambda1).value.abs()
        / grad_norm_dlambda(n, cfg.b1.lambda);
    let p_l2 = io_prime_pairing(cfg, Direction::DLambda2).value.abs()
        / grad_norm_dlambda(n, cfg.b2.lambda);
    let p_x1 =
        io_prime_pairing_axial(cfg, 1).value.abs() * e_max / grad_norm_dxi(n, cfg.b1.lambda);
    let p_x2 =
        io_prime_pairing_axial(cfg, 2).value.abs() * e_max / grad_norm_dxi(n, cfg.b2.lambda);
    p_l1.max(p_l2).max(p_x1).max(p_x2)
}
