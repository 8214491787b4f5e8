//! Seeded importance-sampling Monte Carlo for single-center moment integrals.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Beta, Distribution, StandardNormal};

use super::{IntegralEstimate, Method};
use crate::polyalg::HomogeneousPoly;
use crate::{Error, Result};

/// Uniform direction on S^{n−1}: normalized standard Gaussian vector.
pub(crate) fn sample_direction(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-12 {
            return v.into_iter().map(|x| x / norm).collect();
        }
    }
}

/// Samples r with radial density ∝ r^{n−1}(λ² + r²)^{−p} via
/// u = r²/(λ² + r²) ~ Beta(n/2, p − n/2).
pub(crate) fn sample_bubble_radius(rng: &mut ChaCha8Rng, n: usize, lambda: f64, p: f64) -> f64 {
    let beta = Beta::new(n as f64 / 2.0, p - n as f64 / 2.0).expect("valid Beta parameters");
    let u: f64 = beta.sample(rng);
    let u = u.clamp(1e-300, 1.0 - 1e-16);
    lambda * (u / (1.0 - u)).sqrt()
}

/// Normalization ∫(1 + r²)^{−p} dy (λ-independent for the λ-scaled density).
pub(crate) fn bubble_proposal_mass(n: usize, two_p: i64) -> Result<f64> {
    super::j_moment_half(n, 0, two_p)
}

/// Monte-Carlo estimate of ∫ Q(y)(1+|y|²)^{−p} dy.
///
/// Importance proposal (1+r²)^{−(p − ℓ/2)}, which makes the weight
/// Q(y)(1+r²)^{−ℓ/2} bounded by the coefficient mass of Q, so the reported
/// sigma is reliable.
pub fn mc_moment_estimate(
    poly: &HomogeneousPoly,
    p: u32,
    seed: u64,
    samples: u64,
) -> Result<IntegralEstimate> {
    let n = poly.dimension();
    let ell = poly.degree();
    let two_prop = 2 * p as i64 - ell as i64; // 2·(p − ℓ/2)
    if two_prop <= n as i64 {
        return Err(Error::DivergentMoment {
            two_p: 2 * p as i64,
            bound: n as i64 + ell as i64,
        });
    }
    let z = bubble_proposal_mass(n, two_prop)?;
    let p_prop = two_prop as f64 / 2.0;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sum = 0.0;
    let mut sum_sq = 0.0;
    for _ in 0..samples {
        let r = sample_bubble_radius(&mut rng, n, 1.0, p_prop);
        let dir = sample_direction(&mut rng, n);
        let y: Vec<f64> = dir.iter().map(|d| d * r).collect();
        let r2 = 1.0 + r * r;
        // f/q = Q(y)(1+r²)^{−p} / ((1+r²)^{−p_prop}/Z) = Z·Q(y)(1+r²)^{−ℓ/2}
        let w = z * poly.evaluate(&y)? * r2.powf(-(ell as f64) / 2.0);
        sum += w;
        sum_sq += w * w;
    }
    let mean = sum / samples as f64;
    let var = (sum_sq / samples as f64 - mean * mean).max(0.0);
    let sigma = (var / samples as f64).sqrt();
    Ok(IntegralEstimate {
        value: mean,
        abs_error: sigma,
        method: Method::MonteCarlo,
        samples_or_nodes: samples,
        seed: Some(seed),
    })
}
