//! The conformable double Laplace–Sumudu transform over the canonical
//! expression class.
//!
//! In canonical variables the transform is the ordinary double transform
//!
//! ```text
//! Ψ(v, ω) = (1/ω) ∫∫ e^{-vξ - τ/ω} ψ(ξ, τ) dξ dτ
//! ```
//!
//! Laplace in `ξ` (variable `v`) and Sumudu in `τ` (variable `ω`). Images of
//! class members are finite sums of separable rational terms `c · R(v) · Q(ω)`.

mod bipoly;
mod forward;
mod inverse;
mod kernel;
mod rules;

pub use bipoly::BiPoly;
pub use forward::{forward, laplace_factor, laplace_sumudu_swap, single_variable_image};
pub use inverse::{inverse, inverse_laplace, inverse_sumudu, poles};
pub use kernel::{apply_kernel, LinearOperator, OperatorTerm};
pub use rules::{derivative_rule, shift_check, Direction};

use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::rational::Rational;

/// Transform-domain variable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TVar {
    /// Laplace variable of `ξ`.
    V,
    /// Sumudu variable of `τ`.
    W,
}

impl TVar {
    fn symbol(self) -> &'static str {
        match self {
            TVar::V => "v",
            TVar::W => "w",
        }
    }
}

/// Univariate rational function with a monic denominator coprime to its
/// numerator.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RationalFn {
    var: TVar,
    num: Poly<Rational>,
    den: Poly<Rational>,
}

impl RationalFn {
    /// Panics on a zero denominator.
    pub fn new(var: TVar, num: Poly<Rational>, den: Poly<Rational>) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        if num.is_zero() {
            return Self { var, num, den: Poly::one() };
        }
        let g = num.gcd(&den);
        let num = num.exact_div(&g).expect("gcd divides");
        let den = den.exact_div(&g).expect("gcd divides");
        let l = den.lead();
        Self { var, num: num.scale(&l.recip()), den: den.monic() }
    }

    pub fn constant(var: TVar, c: Rational) -> Self {
        Self::new(var, Poly::constant(c), Poly::one())
    }

    pub fn one(var: TVar) -> Self {
        Self::constant(var, Rational::one())
    }

    /// `t^k` for integer `k` of either sign.
    pub fn power(var: TVar, k: i32) -> Self {
        let m = k.unsigned_abs() as usize;
        if k >= 0 {
            Self::new(var, Poly::monomial(Rational::one(), m), Poly::one())
        } else {
            Self::new(var, Poly::one(), Poly::monomial(Rational::one(), m))
        }
    }

    pub fn var(&self) -> TVar {
        self.var
    }

    pub fn num(&self) -> &Poly<Rational> {
        &self.num
    }

    pub fn den(&self) -> &Poly<Rational> {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_constant(&self) -> bool {
        self.num.is_constant() && self.den.is_constant()
    }

    /// Strictly proper: numerator degree below denominator degree.
    pub fn is_proper(&self) -> bool {
        self.num.is_zero() || self.num.degree() < self.den.degree()
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        debug_assert_eq!(self.var, rhs.var);
        Self::new(self.var, self.num.mul(&rhs.num), self.den.mul(&rhs.den))
    }

    pub fn add(&self, rhs: &Self) -> Self {
        debug_assert_eq!(self.var, rhs.var);
        let num = self.num.mul(&rhs.den).add(&rhs.num.mul(&self.den));
        Self::new(self.var, num, self.den.mul(&rhs.den))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::new(self.var, self.num.scale(c), self.den.clone())
    }

    /// Splits off the numerator's leading coefficient: `self = c · monic`.
    pub fn split_lead(&self) -> (Rational, Self) {
        if self.num.is_zero() {
            return (Rational::zero(), Self::one(self.var));
        }
        let c = self.num.lead();
        (c, Self { var: self.var, num: self.num.monic(), den: self.den.clone() })
    }

    pub fn eval(&self, t: f64) -> Result<f64> {
        let d = self.den.eval_f64(t);
        if d == 0.0 || !d.is_finite() {
            return Err(Error::PoleHit);
        }
        Ok(self.num.eval_f64(t) / d)
    }
}

fn fmt_poly(p: &Poly<Rational>, var: &str, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if p.is_zero() {
        return write!(f, "0");
    }
    let mut first = true;
    for (k, c) in p.coeffs().iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let neg = c.is_negative();
        let a = c.abs();
        match (first, neg) {
            (true, true) => write!(f, "-")?,
            (true, false) => {}
            (false, true) => write!(f, " - ")?,
            (false, false) => write!(f, " + ")?,
        }
        first = false;
        if k == 0 {
            write!(f, "{a}")?;
            continue;
        }
        if !a.is_one() {
            write!(f, "{a}*")?;
        }
        if k == 1 {
            write!(f, "{var}")?;
        } else {
            write!(f, "{var}^{k}")?;
        }
    }
    Ok(())
}

/// `(num)/(den)`, or just `(num)` for polynomial images.
impl fmt::Display for RationalFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v = self.var.symbol();
        write!(f, "(")?;
        fmt_poly(&self.num, v, f)?;
        write!(f, ")")?;
        if !self.den.is_constant() {
            write!(f, "/(")?;
            fmt_poly(&self.den, v, f)?;
            write!(f, ")")?;
        }
        Ok(())
    }
}

/// `coeff · rv(v) · qw(ω)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransformTerm {
    pub coeff: Rational,
    pub rv: RationalFn,
    pub qw: RationalFn,
}

impl TransformTerm {
    pub fn new(coeff: Rational, rv: RationalFn, qw: RationalFn) -> Self {
        debug_assert_eq!(rv.var, TVar::V);
        debug_assert_eq!(qw.var, TVar::W);
        let (cv, rv) = rv.split_lead();
        let (cw, qw) = qw.split_lead();
        Self { coeff: coeff * cv * cw, rv, qw }
    }

    pub fn eval(&self, v: f64, w: f64) -> Result<f64> {
        Ok(self.coeff.to_f64() * self.rv.eval(v)? * self.qw.eval(w)?)
    }
}

impl fmt::Display for TransformTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}*{}*{}", self.coeff, self.rv, self.qw)
    }
}

/// Region of convergence `Re v > a_max`, `1/ω > b_max`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Roc {
    pub a_max: Rational,
    pub b_max: Rational,
}

impl Roc {
    pub fn join(&self, other: &Roc) -> Roc {
        Roc { a_max: self.a_max.clone().max(other.a_max.clone()), b_max: self.b_max.clone().max(other.b_max.clone()) }
    }

    pub fn contains(&self, v: f64, w: f64) -> bool {
        w > 0.0 && v > self.a_max.to_f64() && 1.0 / w > self.b_max.to_f64()
    }
}

/// Sum of separable rational terms together with its region of convergence.
#[derive(Debug, Clone, Default)]
pub struct TransformExpr {
    terms: Vec<TransformTerm>,
    pub roc: Roc,
}

impl TransformExpr {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_terms(terms: impl IntoIterator<Item = TransformTerm>, roc: Roc) -> Self {
        let mut out = Self { terms: Vec::new(), roc };
        for t in terms {
            out.push(t);
        }
        out
    }

    /// Adds a term, merging with an existing one of the same shape.
    pub fn push(&mut self, term: TransformTerm) {
        let term = TransformTerm::new(term.coeff, term.rv, term.qw);
        if term.coeff.is_zero() {
            return;
        }
        if let Some(pos) = self.terms.iter().position(|t| t.rv == term.rv && t.qw == term.qw) {
            let c = &self.terms[pos].coeff + &term.coeff;
            if c.is_zero() {
                self.terms.remove(pos);
            } else {
                self.terms[pos].coeff = c;
            }
        } else {
            self.terms.push(term);
        }
    }

    pub fn terms(&self) -> &[TransformTerm] {
        &self.terms
    }

    /// Structurally empty. See [`TransformExpr::is_zero`] for the semantic test.
    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let mut out = Self { terms: self.terms.clone(), roc: self.roc.join(&rhs.roc) };
        for t in &rhs.terms {
            out.push(t.clone());
        }
        out
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.scale(&Rational::from_int(-1)))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::from_terms(
            self.terms.iter().map(|t| TransformTerm { coeff: &t.coeff * c, ..t.clone() }),
            self.roc.clone(),
        )
    }

    /// Multiplies every term by a function of `v`.
    pub fn mul_v(&self, r: &RationalFn) -> Self {
        Self::from_terms(
            self.terms.iter().map(|t| TransformTerm::new(t.coeff.clone(), t.rv.mul(r), t.qw.clone())),
            self.roc.clone(),
        )
    }

    /// Multiplies every term by a function of `ω`.
    pub fn mul_w(&self, r: &RationalFn) -> Self {
        Self::from_terms(
            self.terms.iter().map(|t| TransformTerm::new(t.coeff.clone(), t.rv.clone(), t.qw.mul(r))),
            self.roc.clone(),
        )
    }

    /// Puts the whole sum over one denominator: `N(v, ω) / (P(v) Q(ω))` with
    /// `P`, `Q` monic.
    pub fn combined(&self) -> (BiPoly, Poly<Rational>, Poly<Rational>) {
        let p = self.terms.iter().fold(Poly::one(), |acc, t| acc.lcm(&t.rv.den));
        let q = self.terms.iter().fold(Poly::one(), |acc, t| acc.lcm(&t.qw.den));
        let mut n = BiPoly::zero();
        for t in &self.terms {
            let a = t.rv.num.mul(&p.exact_div(&t.rv.den).expect("lcm"));
            let b = t.qw.num.mul(&q.exact_div(&t.qw.den).expect("lcm")).scale(&t.coeff);
            n = n.add(&BiPoly::from_product(&a, &b));
        }
        (n, p, q)
    }

    /// Exact test for the zero function.
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty() || self.combined().0.is_zero()
    }

    /// Exact equality as functions of `(v, ω)`.
    pub fn equivalent(&self, other: &Self) -> bool {
        self.sub(other).is_zero()
    }

    /// `Σ coeff · rv(v) · qw(w)` at a point inside the region of convergence.
    pub fn eval(&self, v: f64, w: f64) -> Result<f64> {
        if !self.roc.contains(v, w) {
            return Err(Error::OutsideRoc);
        }
        self.terms.iter().map(|t| t.eval(v, w)).sum()
    }
}

/// Free-function form of [`TransformExpr::eval`].
pub fn eval_transform(t: &TransformExpr, v: f64, w: f64) -> Result<f64> {
    t.eval(v, w)
}

impl fmt::Display for TransformExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, t) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{t}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    #[test]
    fn rational_fn_normalizes() {
        // (2v + 2) / (4v^2 - 4) = (1/2) / (v - 1)
        let r = RationalFn::new(
            TVar::V,
            Poly::new(alloc::vec![Rational::from_int(2), Rational::from_int(2)]),
            Poly::new(alloc::vec![Rational::from_int(-4), Rational::zero(), Rational::from_int(4)]),
        );
        assert_eq!(r.to_string(), "(1/2)/(v - 1)");
        assert_eq!(RationalFn::power(TVar::W, -2).to_string(), "(1)/(w^2)");
    }

    #[test]
    fn semantic_zero() {
        // v/(v-1) - 1 - 1/(v-1) = 0
        let one_w = RationalFn::one(TVar::W);
        let a = TransformTerm::new(
            Rational::one(),
            RationalFn::new(TVar::V, Poly::monomial(Rational::one(), 1), Poly::linear_root(&Rational::one())),
            one_w.clone(),
        );
        let b = TransformTerm::new(Rational::from_int(-1), RationalFn::one(TVar::V), one_w.clone());
        let c = TransformTerm::new(
            Rational::from_int(-1),
            RationalFn::new(TVar::V, Poly::one(), Poly::linear_root(&Rational::one())),
            one_w,
        );
        let t = TransformExpr::from_terms([a, b, c], Roc::default());
        assert_eq!(t.terms().len(), 3);
        assert!(t.is_zero());
    }

    #[test]
    fn eval_checks_roc() {
        let t = TransformExpr::zero();
        assert_eq!(t.eval(1.0, 0.5).unwrap(), 0.0);
        assert_eq!(t.eval(1.0, -0.5), Err(Error::OutsideRoc));
        assert_eq!(t.eval(-1.0, 0.5), Err(Error::OutsideRoc));
    }
}
