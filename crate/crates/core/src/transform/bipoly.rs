use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::poly::Poly;
use crate::rational::Rational;

/// Polynomial in `(v, ω)` keyed by `(power of v, power of ω)`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct BiPoly {
    terms: BTreeMap<(usize, usize), Rational>,
}

impl BiPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, i: usize, j: usize, c: Rational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry((i, j)).or_insert_with(Rational::zero);
        *entry += &c;
        if entry.is_zero() {
            self.terms.remove(&(i, j));
        }
    }

    /// `p(v) · q(ω)`.
    pub fn from_product(p: &Poly<Rational>, q: &Poly<Rational>) -> Self {
        let mut out = Self::zero();
        for (i, a) in p.coeffs().iter().enumerate() {
            for (j, b) in q.coeffs().iter().enumerate() {
                out.add_term(i, j, a * b);
            }
        }
        out
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(usize, usize), &Rational)> {
        self.terms.iter()
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        for (&(i, j), c) in &rhs.terms {
            out.add_term(i, j, c.clone());
        }
        out
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let mut out = Self::zero();
        for (&(i, j), a) in &self.terms {
            for (&(k, l), b) in &rhs.terms {
                out.add_term(i + k, j + l, a * b);
            }
        }
        out
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut out = Self::zero();
        for (&(i, j), a) in &self.terms {
            out.add_term(i, j, a * c);
        }
        out
    }

    /// Multiplies by `ω^k`.
    pub fn shift_w(&self, k: usize) -> Self {
        Self { terms: self.terms.iter().map(|(&(i, j), c)| ((i, j + k), c.clone())).collect() }
    }

    /// Leading term in lexicographic order, `v` before `ω`.
    fn leading(&self) -> Option<((usize, usize), Rational)> {
        self.terms.iter().next_back().map(|(&k, c)| (k, c.clone()))
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|&(i, j)| i == 0 && j == 0)
    }

    pub fn constant_term(&self) -> Rational {
        self.terms.get(&(0, 0)).cloned().unwrap_or_else(Rational::zero)
    }

    /// Exact quotient by `divisor`, or `None` when the division leaves a remainder.
    pub fn exact_div(&self, divisor: &Self) -> Option<Self> {
        let ((di, dj), dc) = divisor.leading()?;
        let mut rem = self.clone();
        let mut quot = Self::zero();
        while let Some(((ri, rj), rc)) = rem.leading() {
            if ri < di || rj < dj {
                return None;
            }
            let (qi, qj) = (ri - di, rj - dj);
            let qc = &rc / &dc;
            for (&(i, j), c) in &divisor.terms {
                rem.add_term(i + qi, j + qj, -(c * &qc));
            }
            quot.add_term(qi, qj, qc);
        }
        Some(quot)
    }

    /// Coefficients of `ω^j` as polynomials in `v`.
    pub fn coeffs_in_v(&self) -> Vec<Poly<Rational>> {
        let max_j = self.terms.keys().map(|&(_, j)| j).max().unwrap_or(0);
        let max_i = self.terms.keys().map(|&(i, _)| i).max().unwrap_or(0);
        (0..=max_j)
            .map(|j| {
                Poly::new(
                    (0..=max_i).map(|i| self.terms.get(&(i, j)).cloned().unwrap_or_else(Rational::zero)).collect(),
                )
            })
            .collect()
    }

    /// Coefficients of `v^i` as polynomials in `ω`.
    pub fn coeffs_in_w(&self) -> Vec<Poly<Rational>> {
        let max_j = self.terms.keys().map(|&(_, j)| j).max().unwrap_or(0);
        let max_i = self.terms.keys().map(|&(i, _)| i).max().unwrap_or(0);
        (0..=max_i)
            .map(|i| {
                Poly::new(
                    (0..=max_j).map(|j| self.terms.get(&(i, j)).cloned().unwrap_or_else(Rational::zero)).collect(),
                )
            })
            .collect()
    }

    /// Monic gcd of the `ω`-coefficients: the largest factor depending on `v` only.
    pub fn content_v(&self) -> Poly<Rational> {
        self.coeffs_in_v().iter().fold(Poly::zero(), |g, c| g.gcd(c))
    }

    /// Monic gcd of the `v`-coefficients: the largest factor depending on `ω` only.
    pub fn content_w(&self) -> Poly<Rational> {
        self.coeffs_in_w().iter().fold(Poly::zero(), |g, c| g.gcd(c))
    }

    pub fn eval_f64(&self, v: f64, w: f64) -> f64 {
        self.terms.iter().map(|(&(i, j), c)| c.to_f64() * libm::pow(v, i as f64) * libm::pow(w, j as f64)).sum()
    }
}
