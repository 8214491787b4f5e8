//! Shared fixtures for the kernel benchmarks.

use twinpeaks_core::bubble::{Bubble, BubbleConfig};
use twinpeaks_core::polyalg::HomogeneousPoly;
use twinpeaks_core::reduce::{compute_constants, ReductionConstants};
use twinpeaks_core::TwinPeakModel;

/// A dense-ish degree-4 even polynomial in R⁹.
pub fn bench_poly() -> HomogeneousPoly {
    let mut p = HomogeneousPoly::zero(9, 4);
    let mut alpha = vec![0u32; 9];
    for i in 0..9 {
        for j in i..9 {
            alpha.fill(0);
            alpha[i] += 2;
            alpha[j] += 2;
            p.add_term(
                twinpeaks_core::polyalg::MultiIndex::new(alpha.clone()),
                ((i + 2 * j) as f64).sin(),
            )
            .unwrap();
        }
    }
    p
}

/// Standard pair for the reduced-map benchmarks.
pub fn bench_model() -> (TwinPeakModel, ReductionConstants) {
    (
        TwinPeakModel::symmetric(6, 2, 0.05).unwrap(),
        compute_constants(6, 2).unwrap(),
    )
}

/// Two-bubble geometry at D = 40.
pub fn bench_config() -> BubbleConfig {
    let n = 6;
    let mut q2 = vec![0.0; n];
    q2[0] = 2.0;
    BubbleConfig::new(
        Bubble::new(n, 0.05, vec![0.0; n]).unwrap(),
        Bubble::new(n, 0.05, q2).unwrap(),
        2.0,
    )
    .unwrap()
}
