//! Exact algebra of homogeneous polynomials on Rⁿ.
//!
//! A degree-ℓ homogeneous polynomial is stored as a sparse map from even
//! or odd multi-indices α to real coefficients.  The module provides
//! evaluation, the flat Laplacian, the iterated Laplacian
//! ϖ = Δ^{(ℓ/2)} P (a number), and the even-moment coefficients
//! (α₁)!₋₂ ⋯ (αₙ)!₋₂ that reduce sphere moments of monomials to the
//! reference moment J.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Exponent vector α = (α₁, …, αₙ) of a monomial y^α.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MultiIndex(pub Vec<u32>);

impl MultiIndex {
    pub fn new(exponents: Vec<u32>) -> Self {
        MultiIndex(exponents)
    }

    /// Ambient dimension n.
    pub fn dimension(&self) -> usize {
        self.0.len()
    }

    /// Total degree |α| = Σ αᵢ.
    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    /// True when every exponent is even (possibly zero).
    pub fn is_even(&self) -> bool {
        self.0.iter().all(|&a| a % 2 == 0)
    }
}

/// `m!₋₂`: descending double factorial offset used by the moment reduction.
///
/// Equals 1 for m ∈ {0, 2}, vanishes for odd m, and equals
/// (m−1)(m−3)⋯3·1 for even m ≥ 4.
pub fn double_factorial_minus2(m: u32) -> u64 {
    if m % 2 == 1 {
        return 0;
    }
    if m <= 2 {
        return 1;
    }
    let mut prod = 1u64;
    let mut k = m - 1;
    while k >= 1 {
        prod *= k as u64;
        if k < 2 {
            break;
        }
        k -= 2;
    }
    prod
}

/// ∏ᵢ (αᵢ)!₋₂, zero whenever any exponent is odd.
///
/// For an even multi-index of degree ℓ this is the factor relating both
/// the moment ∫ y^α (1+|y|²)^{−p} dy and the iterated Laplacian of y^α to
/// their values on the reference monomial y₁²⋯y_{ℓ/2}².
pub fn reduction_coefficient(alpha: &MultiIndex) -> u64 {
    alpha.0.iter().map(|&a| double_factorial_minus2(a)).product()
}

/// Even descending product ℓ(ℓ−2)⋯2 = 2^h h!  (h = ℓ/2); equals 1 for ℓ = 0.
///
/// This is the iterated Laplacian of the reference monomial y₁²⋯y_h².
pub fn even_descending_product(ell: u32) -> f64 {
    let mut prod = 1.0;
    let mut k = ell;
    while k >= 2 {
        prod *= k as f64;
        k -= 2;
    }
    prod
}

/// Sparse homogeneous polynomial of fixed degree on Rⁿ.
///
/// Canonical form: every stored multi-index has total degree exactly
/// `degree`, and no zero coefficients are stored.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "PolyWire", into = "PolyWire")]
pub struct HomogeneousPoly {
    dimension: usize,
    degree: u32,
    terms: BTreeMap<MultiIndex, f64>,
}

/// Wire format: `{"n": …, "degree": …, "terms": [{"alpha": […], "c": …}]}`.
#[derive(Serialize, Deserialize)]
struct PolyWire {
    n: usize,
    degree: u32,
    terms: Vec<TermWire>,
}

#[derive(Serialize, Deserialize)]
struct TermWire {
    alpha: Vec<u32>,
    c: f64,
}

impl From<HomogeneousPoly> for PolyWire {
    fn from(p: HomogeneousPoly) -> Self {
        PolyWire {
            n: p.dimension,
            degree: p.degree,
            terms: p
                .terms
                .into_iter()
                .map(|(alpha, c)| TermWire { alpha: alpha.0, c })
                .collect(),
        }
    }
}

impl TryFrom<PolyWire> for HomogeneousPoly {
    type Error = Error;

    fn try_from(w: PolyWire) -> Result<Self> {
        let mut p = HomogeneousPoly::zero(w.n, w.degree);
        for t in w.terms {
            p.add_term(MultiIndex::new(t.alpha), t.c)?;
        }
        Ok(p)
    }
}

impl HomogeneousPoly {
    /// The zero polynomial of the given dimension and degree.
    pub fn zero(dimension: usize, degree: u32) -> Self {
        HomogeneousPoly {
            dimension,
            degree,
            terms: BTreeMap::new(),
        }
    }

    /// Single monomial c·y^α.
    pub fn monomial(dimension: usize, alpha: Vec<u32>, c: f64) -> Result<Self> {
        let idx = MultiIndex::new(alpha);
        let degree = idx.degree();
        let mut p = Self::zero(dimension, degree);
        p.add_term(idx, c)?;
        Ok(p)
    }

    /// Builds a polynomial from (α, c) pairs, all of the same total degree.
    pub fn from_terms(dimension: usize, degree: u32, terms: &[(Vec<u32>, f64)]) -> Result<Self> {
        let mut p = Self::zero(dimension, degree);
        for (alpha, c) in terms {
            p.add_term(MultiIndex::new(alpha.clone()), *c)?;
        }
        Ok(p)
    }

    /// The radial power (y₁² + ⋯ + yₙ²)^{ℓ/2}, expanded multinomially.
    pub fn radial(dimension: usize, ell: u32) -> Result<Self> {
        if ell % 2 != 0 {
            return Err(Error::OddDegree { degree: ell });
        }
        let h = ell / 2;
        let mut p = Self::zero(dimension, ell);
        // Multinomial expansion of (Σ yᵢ²)^h over compositions of h.
        let mut comp = vec![0u32; dimension];
        fn rec(
            p: &mut HomogeneousPoly,
            comp: &mut Vec<u32>,
            slot: usize,
            remaining: u32,
            coeff: f64,
            h: u32,
        ) {
            let n = comp.len();
            if slot == n - 1 {
                comp[slot] = remaining;
                // multinomial h! / ∏ compᵢ!
                let mut c = 1.0;
                let mut used = 0u32;
                for &k in comp.iter() {
                    for j in 1..=k {
                        used += 1;
                        c *= used as f64 / j as f64;
                    }
                }
                debug_assert_eq!(used, h);
                let alpha: Vec<u32> = comp.iter().map(|&k| 2 * k).collect();
                p.add_term(MultiIndex::new(alpha), c * coeff).unwrap();
                return;
            }
            for k in 0..=remaining {
                comp[slot] = k;
                rec(p, comp, slot + 1, remaining - k, coeff, h);
            }
            comp[slot] = 0;
        }
        rec(&mut p, &mut comp, 0, h, 1.0, h);
        Ok(p)
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, f64)> {
        self.terms.iter().map(|(a, &c)| (a, c))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Sum of absolute coefficient values; bounds |P(y)| ≤ (Σ|c|)·|y|^ℓ.
    pub fn coeff_abs_sum(&self) -> f64 {
        self.terms.values().map(|c| c.abs()).sum()
    }

    /// Adds c·y^α in place, dropping the entry if it cancels exactly.
    pub fn add_term(&mut self, alpha: MultiIndex, c: f64) -> Result<()> {
        if alpha.dimension() != self.dimension {
            return Err(Error::DimensionMismatch {
                expected: self.dimension,
                got: alpha.dimension(),
            });
        }
        if alpha.degree() != self.degree {
            return Err(Error::Invalid(format!(
                "multi-index degree {} does not match polynomial degree {}",
                alpha.degree(),
                self.degree
            )));
        }
        if c == 0.0 {
            return Ok(());
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(alpha) {
            Entry::Vacant(slot) => {
                slot.insert(c);
            }
            Entry::Occupied(mut slot) => {
                *slot.get_mut() += c;
                if *slot.get() == 0.0 {
                    slot.remove();
                }
            }
        }
        Ok(())
    }

    /// Returns a·self (the zero polynomial when a = 0).
    pub fn scale(&self, a: f64) -> Self {
        let mut out = Self::zero(self.dimension, self.degree);
        if a == 0.0 {
            return out;
        }
        for (alpha, c) in self.terms() {
            out.add_term(alpha.clone(), a * c).unwrap();
        }
        out
    }

    /// Returns self + other (same dimension and degree required).
    pub fn add(&self, other: &Self) -> Result<Self> {
        if other.dimension != self.dimension || other.degree != self.degree {
            return Err(Error::Invalid(
                "polynomial sum requires matching dimension and degree".into(),
            ));
        }
        let mut out = self.clone();
        for (alpha, c) in other.terms() {
            out.add_term(alpha.clone(), c)?;
        }
        Ok(out)
    }

    /// Applies yᵢ → −yᵢ to the polynomial.
    pub fn reflect(&self, i: usize) -> Self {
        let mut out = Self::zero(self.dimension, self.degree);
        for (alpha, c) in self.terms() {
            let sign = if alpha.0[i] % 2 == 0 { 1.0 } else { -1.0 };
            out.add_term(alpha.clone(), sign * c).unwrap();
        }
        out
    }

    /// Evaluates Σ c·∏ yᵢ^{αᵢ} at `point`.
    pub fn evaluate(&self, point: &[f64]) -> Result<f64> {
        if point.len() != self.dimension {
            return Err(Error::DimensionMismatch {
                expected: self.dimension,
                got: point.len(),
            });
        }
        let mut sum = 0.0;
        for (alpha, c) in self.terms() {
            let mut m = c;
            for (y, &a) in point.iter().zip(alpha.0.iter()) {
                m *= y.powi(a as i32);
            }
            sum += m;
        }
        Ok(sum)
    }

    /// The flat Laplacian Δ, a homogeneous polynomial of degree ℓ − 2.
    pub fn laplacian(&self) -> Result<Self> {
        if self.degree < 2 {
            return Err(Error::DegreeTooLow {
                degree: self.degree,
            });
        }
        let mut out = Self::zero(self.dimension, self.degree - 2);
        for (alpha, c) in self.terms() {
            for i in 0..self.dimension {
                let a = alpha.0[i];
                if a >= 2 {
                    let mut beta = alpha.clone();
                    beta.0[i] = a - 2;
                    out.add_term(beta, c * (a as f64) * (a as f64 - 1.0))?;
                }
            }
        }
        Ok(out)
    }

    /// Iterated Laplacian ϖ = Δ^{(ℓ/2)} P, a number (requires even ℓ).
    pub fn iterated_laplacian_value(&self) -> Result<f64> {
        if self.degree % 2 != 0 {
            return Err(Error::OddDegree {
                degree: self.degree,
            });
        }
        let mut p = self.clone();
        for _ in 0..(self.degree / 2) {
            p = p.laplacian()?;
        }
        debug_assert_eq!(p.degree, 0);
        Ok(p
            .terms
            .first_key_value()
            .map(|(_, &c)| c)
            .unwrap_or(0.0))
    }
}
