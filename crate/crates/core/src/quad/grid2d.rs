//! Cylindrical quadrature grid for two-center integrals on Rⁿ.
//!
//! With the two centers on a common axis, y = ξ₁ + s·e + t·w (w a unit
//! vector transverse to the axis), an axially symmetric integrand reduces to
//! ∫f = ω_{n−1}·∫∫ f(s, t)·t^{n−2} dt ds over the (s, t) half-plane.
//!
//! The grid panels both coordinates geometrically around each center at its
//! own concentration scale and maps the infinite tails through s ↦ S/u, so
//! the bubbles are resolved at scale λ and the far field is integrated
//! without truncation.

use super::gauss::{geometric_breaks, panels_from_breaks, PanelRule};
use super::sphere_area;

/// Precomputed nodes (s, t, weight) for one two-center geometry.
pub struct CylGrid {
    nodes: Vec<(f64, f64, f64)>,
}

/// Multiple of the outer scale at which mapped tails take over.
const FAR_MULT: f64 = 8.0;

impl CylGrid {
    /// Builds a grid for centers at s = 0 (scale `lam1`) and s = `delta`
    /// (scale `lam2`) in dimension `n`, with `pts` Gauss points per panel.
    pub fn new(n: usize, lam1: f64, lam2: f64, delta: f64, pts: usize) -> Self {
        assert!(delta >= 0.0);
        let outer = FAR_MULT * (delta + lam1.max(lam2));

        let mut s_panels: Vec<(f64, f64)> = Vec::new();
        if delta > 0.0 {
            let mid = 0.5 * delta;
            // center 1, towards the midpoint and away from it
            for (a, b) in panels_from_breaks(&geometric_breaks(lam1, mid)) {
                s_panels.push((a, b));
            }
            for (a, b) in panels_from_breaks(&geometric_breaks(lam1, outer)) {
                s_panels.push((-a, b));
            }
            // center 2, mirrored around s = delta
            for (a, b) in panels_from_breaks(&geometric_breaks(lam2, mid)) {
                s_panels.push((delta - a, b));
            }
            for (a, b) in panels_from_breaks(&geometric_breaks(lam2, outer)) {
                s_panels.push((delta + a, b));
            }
        } else {
            let lam = lam1.min(lam2);
            for (a, b) in panels_from_breaks(&geometric_breaks(lam, outer)) {
                s_panels.push((a, b));
                s_panels.push((-a, b));
            }
        }
        let s_rule = PanelRule {
            panels: s_panels,
            upper_tail: Some(delta + outer),
            lower_tail: Some(outer),
        };

        let t_rule = PanelRule {
            panels: panels_from_breaks(&geometric_breaks(lam1.min(lam2), outer)),
            upper_tail: Some(outer),
            lower_tail: None,
        };

        let area = sphere_area(n - 1);
        let s_nodes = s_rule.nodes(pts);
        let t_nodes = t_rule.nodes(pts);
        let mut nodes = Vec::with_capacity(s_nodes.len() * t_nodes.len());
        for &(s, ws) in &s_nodes {
            for &(t, wt) in &t_nodes {
                nodes.push((s, t, area * ws * wt * t.powi(n as i32 - 2)));
            }
        }
        CylGrid { nodes }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// ∫ f(s, t)·ω_{n−1} t^{n−2} dt ds over the whole plane.
    pub fn integrate<F: Fn(f64, f64) -> f64>(&self, f: F) -> f64 {
        self.nodes.iter().map(|&(s, t, w)| w * f(s, t)).sum()
    }
}

/// Fine/coarse pair used to attach an error estimate to grid integrals.
pub(crate) fn integrate_with_error<F: Fn(f64, f64) -> f64>(
    n: usize,
    lam1: f64,
    lam2: f64,
    delta: f64,
    f: F,
) -> (f64, f64, u64) {
    let fine = CylGrid::new(n, lam1, lam2, delta, 18);
    let coarse = CylGrid::new(n, lam1, lam2, delta, 12);
    let v_fine = fine.integrate(&f);
    let v_coarse = coarse.integrate(&f);
    (
        v_fine,
        (v_fine - v_coarse).abs(),
        (fine.len() + coarse.len()) as u64,
    )
}
