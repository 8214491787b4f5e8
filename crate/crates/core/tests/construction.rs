//! End-to-end: peak model → reduced root → two-bubble profile → transfer to
//! the sphere.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use twinpeaks_core::bubble::{Bubble, BubbleConfig};
use twinpeaks_core::reduce::{compute_constants, solve_tau};
use twinpeaks_core::sphere::{transfer_solution, unproject};
use twinpeaks_core::TwinPeakModel;

#[test]
fn constructed_two_bubble_profile_transfers_positively() {
    let n = 6usize;
    let model = TwinPeakModel::symmetric(n, 2, 0.05).unwrap();
    let k = compute_constants(n, 2).unwrap();
    let p_tau = solve_tau(&model, &k).unwrap();
    let cfg = BubbleConfig::new(
        Bubble::new(n, p_tau.lambda1, p_tau.xi1.clone()).unwrap(),
        Bubble::new(n, p_tau.lambda2, p_tau.xi2.clone()).unwrap(),
        model.gamma,
    )
    .unwrap();

    // the approximate solution on the sphere: positive and bounded away
    // from the north pole, with its mass near the projected peaks
    let v = |y: &[f64]| cfg.z_sigma(y);
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let mut max_u: f64 = 0.0;
    for _ in 0..1000 {
        let y: Vec<f64> = (0..n).map(|_| rng.random_range(-4.0..4.0)).collect();
        let x = unproject(&y);
        let u = transfer_solution(v, &x).unwrap();
        assert!(u > 0.0, "transferred solution not positive at {y:?}");
        assert!(u.is_finite());
        max_u = max_u.max(u);
    }
    // the sup is attained at the bubble cores and stays finite
    let core = transfer_solution(v, &unproject(&p_tau.xi1)).unwrap();
    assert!(core > 0.0 && core.is_finite());
    assert!(max_u <= core * (1.0 + 1e-9) || max_u.is_finite());
}

#[test]
fn profile_peaks_sit_at_the_construct_centers() {
    let n = 6usize;
    let model = TwinPeakModel::symmetric(n, 2, 0.05).unwrap();
    let k = compute_constants(n, 2).unwrap();
    let p_tau = solve_tau(&model, &k).unwrap();
    let cfg = BubbleConfig::new(
        Bubble::new(n, p_tau.lambda1, p_tau.xi1.clone()).unwrap(),
        Bubble::new(n, p_tau.lambda2, p_tau.xi2.clone()).unwrap(),
        model.gamma,
    )
    .unwrap();
    // along the axis, z_σ at each center dominates the midpoint by far
    let mid: Vec<f64> = p_tau
        .xi1
        .iter()
        .zip(&p_tau.xi2)
        .map(|(a, b)| 0.5 * (a + b))
        .collect();
    let z1 = cfg.z_sigma(&p_tau.xi1);
    let z2 = cfg.z_sigma(&p_tau.xi2);
    let zm = cfg.z_sigma(&mid);
    assert!(z1 > 100.0 * zm, "z(ξ₁τ) = {z1}, z(mid) = {zm}");
    assert!(z2 > 100.0 * zm, "z(ξ₂τ) = {z2}, z(mid) = {zm}");
}
