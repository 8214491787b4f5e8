//! Gauss–Legendre rules and panel integration helpers.

/// Nodes and weights of the N-point Gauss–Legendre rule on [−1, 1].
///
/// Newton iteration on Pₙ with the Chebyshev-like initial guess; accurate to
/// machine precision for the small N used here.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, dp) = legendre(n, x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let (_, dp) = legendre(n, x);
        nodes[i] = x;
        weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    (nodes, weights)
}

/// (Pₙ(x), Pₙ′(x)) by the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let dp = (n as f64) * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

/// A 1-D panel decomposition: finite panels plus optional mapped tails.
#[derive(Debug, Clone)]
pub struct PanelRule {
    /// (midpoint, half-width) of each finite panel.
    pub panels: Vec<(f64, f64)>,
    /// Start of a +∞ tail, handled by the substitution s = S/u, if any.
    pub upper_tail: Option<f64>,
    /// Start (in absolute value) of a −∞ tail, if any.
    pub lower_tail: Option<f64>,
}

impl PanelRule {
    /// Nodes and weights of the composite rule, tails included.
    pub fn nodes(&self, pts: usize) -> Vec<(f64, f64)> {
        let (xs, ws) = gauss_legendre(pts);
        let mut out = Vec::new();
        for &(mid, half) in &self.panels {
            for (&x, &w) in xs.iter().zip(&ws) {
                out.push((mid + half * x, half * w));
            }
        }
        // ∫_S^∞ f ds = ∫_0^1 f(S/u)·S/u² du, and the mirror image.
        if let Some(s0) = self.upper_tail {
            for (&x, &w) in xs.iter().zip(&ws) {
                let u = 0.5 * (x + 1.0);
                let wu = 0.5 * w;
                out.push((s0 / u, wu * s0 / (u * u)));
            }
        }
        if let Some(s0) = self.lower_tail {
            for (&x, &w) in xs.iter().zip(&ws) {
                let u = 0.5 * (x + 1.0);
                let wu = 0.5 * w;
                out.push((-s0 / u, wu * s0 / (u * u)));
            }
        }
        out
    }
}

/// Ascending breakpoints 0, scale/4, scale/2, scale, 2·scale, … clipped at
/// `limit`; geometric refinement toward 0 at the given scale.
pub fn geometric_breaks(scale: f64, limit: f64) -> Vec<f64> {
    let mut out = vec![0.0];
    if limit <= 0.0 {
        return out;
    }
    let mut b = 0.25 * scale.min(limit);
    while b < limit {
        out.push(b);
        b *= 2.0;
    }
    out.push(limit);
    out
}

/// Finite panels between consecutive breakpoints.
pub fn panels_from_breaks(breaks: &[f64]) -> Vec<(f64, f64)> {
    breaks
        .windows(2)
        .filter(|w| w[1] > w[0])
        .map(|w| (0.5 * (w[0] + w[1]), 0.5 * (w[1] - w[0])))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn gl_integrates_polynomials_exactly() {
        let (xs, ws) = gauss_legendre(8);
        // degree-15 polynomial x^14 over [−1,1]: 2/15
        let got: f64 = xs.iter().zip(&ws).map(|(&x, &w)| w * x.powi(14)).sum();
        assert_relative_eq!(got, 2.0 / 15.0, max_relative = 1e-13);
    }

    #[test]
    fn tail_map_integrates_power_decay() {
        // ∫_1^∞ s^{−3} ds = 1/2
        let rule = PanelRule {
            panels: vec![],
            upper_tail: Some(1.0),
            lower_tail: None,
        };
        let got: f64 = rule
            .nodes(24)
            .iter()
            .map(|&(s, w)| w * s.powi(-3))
            .sum();
        assert_relative_eq!(got, 0.5, max_relative = 1e-12);
    }

    #[test]
    fn composite_rule_gaussian() {
        // ∫_0^6 e^{−s²} ds = √π/2 up to an e^{−36} tail
        let breaks = geometric_breaks(1.0, 6.0);
        let rule = PanelRule {
            panels: panels_from_breaks(&breaks),
            upper_tail: None,
            lower_tail: None,
        };
        let got: f64 = rule.nodes(16).iter().map(|&(s, w)| w * (-s * s).exp()).sum();
        assert_relative_eq!(got, 0.886226925452758, max_relative = 1e-12);
    }
}
