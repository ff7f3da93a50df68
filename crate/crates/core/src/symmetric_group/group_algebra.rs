use std::collections::BTreeMap;
use std::ops::{Add, Mul, Sub};

use crate::symmetric_group::Permutation;
use crate::C64;

/// Coefficients below this magnitude are dropped after products.
const PRUNE: f64 = 1e-15;

/// Finitely supported element `Σ_g c_g g` of the group algebra of `S_n`.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupAlgebraElement {
    n: usize,
    terms: BTreeMap<Permutation, C64>,
}

impl GroupAlgebraElement {
    pub fn zero(n: usize) -> Self {
        GroupAlgebraElement {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::basis(Permutation::identity(n), C64::new(1.0, 0.0))
    }

    pub fn basis(g: Permutation, c: C64) -> Self {
        let n = g.degree();
        let mut terms = BTreeMap::new();
        terms.insert(g, c);
        GroupAlgebraElement { n, terms }
    }

    pub fn from_terms(n: usize, terms: impl IntoIterator<Item = (Permutation, C64)>) -> Self {
        let mut e = Self::zero(n);
        for (g, c) in terms {
            assert_eq!(g.degree(), n);
            *e.terms.entry(g).or_insert(C64::new(0.0, 0.0)) += c;
        }
        e
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> &BTreeMap<Permutation, C64> {
        &self.terms
    }

    pub fn coeff(&self, g: &Permutation) -> C64 {
        self.terms.get(g).copied().unwrap_or(C64::new(0.0, 0.0))
    }

    pub fn scale(&self, s: C64) -> Self {
        GroupAlgebraElement {
            n: self.n,
            terms: self.terms.iter().map(|(g, c)| (g.clone(), c * s)).collect(),
        }
    }

    /// `Σ c_g* g⁻¹` (adjoint in the regular representation).
    pub fn adjoint(&self) -> Self {
        GroupAlgebraElement {
            n: self.n,
            terms: self
                .terms
                .iter()
                .map(|(g, c)| (g.inverse(), c.conj()))
                .collect(),
        }
    }

    /// Sum of squared coefficient magnitudes, rooted.
    pub fn norm(&self) -> f64 {
        self.terms
            .values()
            .map(|c| c.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Largest coefficient distance to `other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let mut m: f64 = 0.0;
        for (g, c) in &self.terms {
            m = m.max((c - other.coeff(g)).norm());
        }
        for (g, c) in &other.terms {
            if !self.terms.contains_key(g) {
                m = m.max(c.norm());
            }
        }
        m
    }

    fn pruned(mut self) -> Self {
        self.terms.retain(|_, c| c.norm() > PRUNE);
        self
    }
}

impl Add for &GroupAlgebraElement {
    type Output = GroupAlgebraElement;
    fn add(self, rhs: &GroupAlgebraElement) -> GroupAlgebraElement {
        assert_eq!(self.n, rhs.n);
        let mut out = self.clone();
        for (g, c) in &rhs.terms {
            *out.terms.entry(g.clone()).or_insert(C64::new(0.0, 0.0)) += c;
        }
        out
    }
}

impl Sub for &GroupAlgebraElement {
    type Output = GroupAlgebraElement;
    fn sub(self, rhs: &GroupAlgebraElement) -> GroupAlgebraElement {
        self + &rhs.scale(C64::new(-1.0, 0.0))
    }
}

impl Mul for &GroupAlgebraElement {
    type Output = GroupAlgebraElement;
    /// Convolution: `(Σ a_g g)(Σ b_h h) = Σ a_g b_h (g∘h)`.
    fn mul(self, rhs: &GroupAlgebraElement) -> GroupAlgebraElement {
        assert_eq!(self.n, rhs.n);
        let mut out = GroupAlgebraElement::zero(self.n);
        for (g, a) in &self.terms {
            for (h, b) in &rhs.terms {
                *out.terms.entry(g.compose(h)).or_insert(C64::new(0.0, 0.0)) += a * b;
            }
        }
        out.pruned()
    }
}
