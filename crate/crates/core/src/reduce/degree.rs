//! Brouwer degree of a map on a box, by root enumeration.
//!
//! Roots are located by multi-start damped Newton (Armijo backtracking on
//! ‖F‖², finite-difference Jacobians), clustered, and the degree is the sum
//! of sign(det DF) over the regular roots.  The minimum of ‖F‖ on the box
//! boundary is sampled alongside so callers can apply the
//! boundary-domination robustness test: a perturbation G with
//! max_{∂Ω}‖F − G‖ < min_{∂Ω}‖F‖ has the same degree.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{ReducedPoint, ReductionConstants};
use crate::{Error, Result};

/// Result of a degree computation.
#[derive(Debug, Clone)]
pub struct DegreeOutcome {
    pub degree: i64,
    /// Sampled minimum of ‖F‖ over the box boundary.
    pub min_boundary_norm: f64,
    /// Cluster representatives of the located roots.
    pub roots: Vec<Vec<f64>>,
    /// Residual threshold below which a Newton endpoint counted as a root.
    pub root_tolerance: f64,
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Sign of det(M) together with a conditioning proxy σ_min/σ_max, computed
/// on the row-equilibrated matrix.  Positive row scalings do not change the
/// sign, and equilibration keeps the determinant away from under/overflow
/// when the rows live on wildly different scales (λ^{ℓ−1} against λ^ℓ).
pub(crate) fn equilibrated_det_sign(m: &DMatrix<f64>) -> (i8, f64) {
    let dim = m.nrows();
    let mut scaled = m.clone();
    for r in 0..dim {
        let row_max = (0..dim).map(|c| scaled[(r, c)].abs()).fold(0.0, f64::max);
        if row_max == 0.0 {
            return (0, 0.0);
        }
        for c in 0..dim {
            scaled[(r, c)] /= row_max;
        }
    }
    let svd = scaled.clone().svd(false, false);
    let sig_max = svd.singular_values.max();
    let sig_min = svd.singular_values.min();
    let det = scaled.determinant();
    let sign = if det > 0.0 {
        1
    } else if det < 0.0 {
        -1
    } else {
        0
    };
    (sign, if sig_max > 0.0 { sig_min / sig_max } else { 0.0 })
}

/// Central finite-difference Jacobian with per-coordinate steps.
fn fd_jacobian<F: Fn(&[f64]) -> Vec<f64>>(f: &F, x: &[f64], scales: &[f64]) -> DMatrix<f64> {
    let dim = x.len();
    let mut jac = DMatrix::zeros(dim, dim);
    let mut xp = x.to_vec();
    let mut xm = x.to_vec();
    for c in 0..dim {
        let h = 1e-7 * scales[c].abs().max(1e-300);
        xp[c] = x[c] + h;
        xm[c] = x[c] - h;
        let fp = f(&xp);
        let fm = f(&xm);
        for r in 0..dim {
            jac[(r, c)] = (fp[r] - fm[r]) / (2.0 * h);
        }
        xp[c] = x[c];
        xm[c] = x[c];
    }
    jac
}

/// Damped Newton from `x0`.  λ-coordinates (the first two) must stay
/// positive; steps violating that are rejected by the backtracking loop.
fn damped_newton<F: Fn(&[f64]) -> Vec<f64>>(
    f: &F,
    x0: &[f64],
    scales: &[f64],
    tol: f64,
    max_iter: usize,
) -> Option<Vec<f64>> {
    let mut x = x0.to_vec();
    let mut fx = f(&x);
    for _ in 0..max_iter {
        let res = norm(&fx);
        if res <= tol {
            return Some(x);
        }
        let jac = fd_jacobian(f, &x, scales);
        let rhs = DVector::from_iterator(fx.len(), fx.iter().map(|v| -v));
        let lu = jac.lu();
        let step = lu.solve(&rhs)?;
        // Armijo backtracking on ‖F‖²
        let res_sq = res * res;
        let mut tau = 1.0;
        let mut advanced = false;
        for _ in 0..30 {
            let cand: Vec<f64> = x
                .iter()
                .zip(step.iter())
                .map(|(xi, si)| xi + tau * si)
                .collect();
            if cand[0] > 0.0 && cand[1] > 0.0 {
                let fc = f(&cand);
                let cand_sq = fc.iter().map(|v| v * v).sum::<f64>();
                if cand_sq <= (1.0 - 1e-4 * tau) * res_sq {
                    x = cand;
                    fx = fc;
                    advanced = true;
                    break;
                }
            }
            tau *= 0.5;
        }
        if !advanced {
            return None;
        }
    }
    if norm(&fx) <= tol {
        Some(x)
    } else {
        None
    }
}

/// Runs Newton from `starts` random points in the box around `center` and
/// clusters the roots that land strictly inside.
///
/// Clustering tolerance: 1e−8·λ₁(center) per coordinate, λ-coordinates
/// compared on the log scale.
pub fn multi_start_roots<F: Fn(&[f64]) -> Vec<f64>>(
    f: &F,
    center: &[f64],
    radius: f64,
    tol: f64,
    starts: usize,
    seed: u64,
) -> Vec<Vec<f64>> {
    let scales: Vec<f64> = center
        .iter()
        .map(|c| c.abs().max(radius))
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let lam_ref = center[0].abs().max(1e-300);
    let cluster_tol = 1e-8 * lam_ref;
    let mut clusters: Vec<Vec<f64>> = Vec::new();
    for attempt in 0..starts {
        let x0: Vec<f64> = if attempt == 0 {
            center.to_vec()
        } else {
            center
                .iter()
                .map(|c| c + rng.random_range(-1.0..1.0) * radius)
                .collect()
        };
        if x0[0] <= 0.0 || x0[1] <= 0.0 {
            continue;
        }
        let Some(root) = damped_newton(f, &x0, &scales, tol, 60) else {
            continue;
        };
        // keep only roots strictly inside the box
        if root
            .iter()
            .zip(center)
            .any(|(r, c)| (r - c).abs() >= radius * (1.0 - 1e-9))
        {
            continue;
        }
        let mut merged = false;
        for rep in &clusters {
            let same = rep.iter().enumerate().zip(&root).all(|((i, a), b)| {
                if i < 2 && *a > 0.0 && *b > 0.0 {
                    (a.ln() - b.ln()).abs() <= 1e-8
                } else {
                    (a - b).abs() <= cluster_tol
                }
            });
            if same {
                merged = true;
                break;
            }
        }
        if !merged {
            clusters.push(root);
        }
    }
    clusters
}

/// Brouwer degree of `map` at 0 on the box of half-width
/// `radius_fraction`·λ₁(center) around `p_center`.
///
/// Fails when a root sits too close to the boundary (the sampled minimum of
/// ‖map‖ there falls under 10³ × the root tolerance) or when the Jacobian at
/// a located root is singular.
pub fn degree_on_box<F: Fn(&[f64]) -> Vec<f64>>(
    map: F,
    p_center: &ReducedPoint,
    radius_fraction: f64,
    k: &ReductionConstants,
    seed: u64,
    starts: usize,
) -> Result<DegreeOutcome> {
    let center = p_center.to_vec();
    let dim = center.len();
    if dim != 2 + 2 * k.n {
        return Err(Error::DimensionMismatch {
            expected: 2 + 2 * k.n,
            got: dim,
        });
    }
    let radius = radius_fraction * p_center.lambda1;

    // residual scale from the map on the boundary of the box
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    let mut min_boundary = f64::INFINITY;
    for face in 0..2 * dim {
        let coord = face / 2;
        let side = if face % 2 == 0 { -1.0 } else { 1.0 };
        for sample in 0..40 {
            let mut x = center.clone();
            for (i, xi) in x.iter_mut().enumerate() {
                if i != coord && sample > 0 {
                    *xi += rng.random_range(-1.0..1.0) * radius;
                }
            }
            x[coord] = center[coord] + side * radius;
            if x[0] <= 0.0 || x[1] <= 0.0 {
                continue;
            }
            min_boundary = min_boundary.min(norm(&map(&x)));
        }
    }

    let tol = (min_boundary * 1e-8).max(1e-280);
    let roots = multi_start_roots(&map, &center, radius, tol, starts, seed);

    if min_boundary < 1e3 * tol {
        return Err(Error::RootOnBoundary {
            min_norm: min_boundary,
            threshold: 1e3 * tol,
        });
    }

    let scales: Vec<f64> = center.iter().map(|c| c.abs().max(radius)).collect();
    let mut degree = 0i64;
    for root in &roots {
        let jac = fd_jacobian(&map, root, &scales);
        let (sign, cond) = equilibrated_det_sign(&jac);
        if sign == 0 || cond < 1e-10 {
            return Err(Error::SingularJacobian { det: cond });
        }
        degree += sign as i64;
    }
    Ok(DegreeOutcome {
        degree,
        min_boundary_norm: min_boundary,
        roots,
        root_tolerance: tol,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::peaks::TwinPeakModel;
    use crate::reduce::{compute_constants, solve_tau, TMap};

    fn setup(n: usize, ell: u32, gamma: f64) -> (TwinPeakModel, ReductionConstants) {
        (
            TwinPeakModel::symmetric(n, ell, gamma).unwrap(),
            compute_constants(n, ell).unwrap(),
        )
    }

    #[test]
    fn identity_map_has_degree_one() {
        let k = compute_constants(6, 2).unwrap();
        let center = ReducedPoint {
            lambda1: 1.0,
            lambda2: 1.0,
            xi1: vec![0.1; 6],
            xi2: vec![-0.1; 6],
        };
        // Shifted identity with the root at the center of the box.
        let c = center.to_vec();
        let out = degree_on_box(
            move |x: &[f64]| x.iter().zip(&c).map(|(a, b)| a - b).collect(),
            &center,
            0.5,
            &k,
            1,
            50,
        )
        .unwrap();
        assert_eq!(out.degree, 1);
        assert_eq!(out.roots.len(), 1);
    }

    #[test]
    fn reduced_map_has_degree_minus_one() {
        let (m, k) = setup(6, 2, 0.05);
        let tm = TMap::new(&m, &k).unwrap();
        let p_tau = tm.solve_tau().unwrap();
        let out = degree_on_box(
            move |x: &[f64]| tm.eval(&ReducedPoint::from_vec(6, x).unwrap()),
            &p_tau,
            0.1,
            &k,
            7,
            120,
        )
        .unwrap();
        assert_eq!(out.degree, -1, "roots: {:?}", out.roots);
        assert_eq!(out.roots.len(), 1);
        assert!(out.min_boundary_norm > 0.0);
    }

    #[test]
    fn root_on_boundary_detected() {
        let k = compute_constants(6, 2).unwrap();
        let center = ReducedPoint {
            lambda1: 1.0,
            lambda2: 1.0,
            xi1: vec![0.0; 6],
            xi2: vec![0.0; 6],
        };
        let mut shifted = center.to_vec();
        shifted[3] += 0.5; // root exactly on the ξ-face of the box (radius 0.5)
        let out = degree_on_box(
            move |x: &[f64]| x.iter().zip(&shifted).map(|(a, b)| a - b).collect(),
            &center,
            0.5,
            &k,
            3,
            40,
        );
        assert!(matches!(out, Err(Error::RootOnBoundary { .. })), "{out:?}");
    }

    #[test]
    fn boundary_dominated_perturbation_keeps_degree() {
        let (m, k) = setup(6, 2, 0.05);
        let tm = TMap::new(&m, &k).unwrap();
        let p_tau = solve_tau(&m, &k).unwrap();
        let base = {
            let tm = TMap::new(&m, &k).unwrap();
            degree_on_box(
                move |x: &[f64]| tm.eval(&ReducedPoint::from_vec(6, x).unwrap()),
                &p_tau,
                0.1,
                &k,
                11,
                120,
            )
            .unwrap()
        };
        // bounded perturbation, well under the boundary minimum
        let eps = 0.2 * base.min_boundary_norm / (14.0f64).sqrt();
        let out = degree_on_box(
            move |x: &[f64]| {
                let mut t = tm.eval(&ReducedPoint::from_vec(6, x).unwrap());
                for (i, ti) in t.iter_mut().enumerate() {
                    *ti += eps * ((i as f64 + 1.0) * 12.9898 + x[i % x.len()] * 1e3).sin();
                }
                t
            },
            &p_tau,
            0.1,
            &k,
            13,
            120,
        )
        .unwrap();
        assert_eq!(out.degree, base.degree);
    }

    #[test]
    fn uniqueness_many_starts_single_cluster() {
        let (m, k) = setup(7, 2, 0.05);
        let tm = TMap::new(&m, &k).unwrap();
        let p_tau = tm.solve_tau().unwrap();
        let center = p_tau.to_vec();
        let radius = 0.1 * p_tau.lambda1;
        let tm2 = TMap::new(&m, &k).unwrap();
        let roots = multi_start_roots(
            &move |x: &[f64]| tm2.eval(&ReducedPoint::from_vec(7, x).unwrap()),
            &center,
            radius,
            1e-20,
            1000,
            17,
        );
        assert_eq!(roots.len(), 1, "expected a single root cluster");
    }
}
