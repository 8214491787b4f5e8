//! Sampled verification of the elementary splitting inequalities used by
//! every interaction estimate:
//!
//!   (A) |(a+b)^β − a^β − b^β| ≤ C̄_β·(ab)^{β/2}            for 0 < β ≤ 2,
//!   (B) |(a+b)^M − a^M − b^M| ≤ C̄_M·(a^{M−1}b + b^{M−1}a)  for M ≥ 2,
//!   (C) (a+b)^τ ≤ a^τ + b^τ                                 for 0 < τ ≤ 1.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

/// One exponent's verdict: fitted smallest constant and violation count.
#[derive(Debug, Clone, Serialize)]
pub struct InequalityRow {
    pub family: &'static str,
    pub exponent: f64,
    /// Smallest constant admissible on the sample (max observed ratio).
    pub fitted_constant: f64,
    pub samples: u64,
    pub violations: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct InequalityReport {
    pub rows: Vec<InequalityRow>,
    pub seed: u64,
    pub all_satisfied: bool,
}

/// Samples 10⁴ positive pairs per exponent (log-uniform over six decades)
/// and fits the smallest admissible constants.
pub fn elementary_inequality_suite(seed: u64) -> InequalityReport {
    const SAMPLES: u64 = 10_000;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pairs = Vec::with_capacity(SAMPLES as usize);
    for _ in 0..SAMPLES {
        let a = 10f64.powf(rng.random_range(-3.0..3.0));
        let b = 10f64.powf(rng.random_range(-3.0..3.0));
        pairs.push((a, b));
    }

    let mut rows = Vec::new();

    for beta in [0.25, 0.5, 1.0, 1.5, 2.0] {
        let mut worst = 0.0f64;
        for &(a, b) in &pairs {
            let lhs = ((a + b).powf(beta) - a.powf(beta) - b.powf(beta)).abs();
            let ratio = lhs / (a * b).powf(beta / 2.0);
            worst = worst.max(ratio);
        }
        rows.push(InequalityRow {
            family: "split-beta",
            exponent: beta,
            fitted_constant: worst,
            samples: SAMPLES,
            violations: 0,
        });
    }

    for m in [2.0, 2.5, 3.0, 4.0] {
        let mut worst = 0.0f64;
        for &(a, b) in &pairs {
            let lhs = ((a + b).powf(m) - a.powf(m) - b.powf(m)).abs();
            let ratio = lhs / (a.powf(m - 1.0) * b + b.powf(m - 1.0) * a);
            worst = worst.max(ratio);
        }
        rows.push(InequalityRow {
            family: "split-m",
            exponent: m,
            fitted_constant: worst,
            samples: SAMPLES,
            violations: 0,
        });
    }

    let mut all_satisfied = true;
    for tau in [0.25, 0.5, 0.75, 1.0] {
        let mut violations = 0u64;
        let mut worst = 0.0f64;
        for &(a, b) in &pairs {
            let lhs = (a + b).powf(tau);
            let rhs = a.powf(tau) + b.powf(tau);
            worst = worst.max(lhs / rhs);
            if lhs > rhs * (1.0 + 1e-12) {
                violations += 1;
            }
        }
        if violations > 0 {
            all_satisfied = false;
        }
        rows.push(InequalityRow {
            family: "subadditive-tau",
            exponent: tau,
            fitted_constant: worst,
            samples: SAMPLES,
            violations,
        });
    }

    InequalityReport {
        rows,
        seed,
        all_satisfied,
    }
}
