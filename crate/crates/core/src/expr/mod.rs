//! Canonical symbolic algebra in the canonical variables `ξ = x^η/η` and
//! `τ = y^γ/γ`.
//!
//! Every expression is an exact linear combination of separable basis terms
//!
//! ```text
//! ξ^p · τ^q · e^{aξ + bτ} · T(cξ) · U(dτ)      T, U ∈ {1, sin, cos}
//! ```
//!
//! with rational data. In these variables the conformable partial derivative
//! of order η in `x` is the ordinary derivative `d/dξ` (and likewise for `y`
//! and `τ`), so η and γ only appear when an expression is evaluated at a raw
//! point `(x, y)`.

mod adomian;

pub use adomian::{adomian, NonlinearitySpec};

use alloc::collections::btree_map::{self, BTreeMap};
use alloc::vec::Vec;
use core::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::rational::Rational;

/// One of the two canonical variables.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Var {
    Xi,
    Tau,
}

/// Trigonometric factor of one variable. Frequencies are strictly positive.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub enum Trig {
    #[default]
    None,
    Sin(Rational),
    Cos(Rational),
}

impl Trig {
    /// Normalizes `sin(f·t)` to `(sign, Trig)`; `None` when the factor vanishes
    /// identically (`sin 0`).
    pub fn sin(freq: Rational) -> Option<(i32, Trig)> {
        match freq.signum() {
            0 => None,
            1 => Some((1, Trig::Sin(freq))),
            _ => Some((-1, Trig::Sin(-freq))),
        }
    }

    /// Normalizes `cos(f·t)`; `cos 0` becomes the empty factor.
    pub fn cos(freq: Rational) -> (i32, Trig) {
        match freq.signum() {
            0 => (1, Trig::None),
            1 => (1, Trig::Cos(freq)),
            _ => (1, Trig::Cos(-freq)),
        }
    }

    pub fn frequency(&self) -> Option<&Rational> {
        match self {
            Trig::None => None,
            Trig::Sin(f) | Trig::Cos(f) => Some(f),
        }
    }

    pub fn eval(&self, t: f64) -> f64 {
        match self {
            Trig::None => 1.0,
            Trig::Sin(f) => libm::sin(f.to_f64() * t),
            Trig::Cos(f) => libm::cos(f.to_f64() * t),
        }
    }

    /// Product-to-sum: returns the expansion of `self · other` as weighted factors.
    fn product(&self, other: &Trig) -> Vec<(Rational, Trig)> {
        let half = Rational::new(1, 2);
        let mut out = Vec::with_capacity(2);
        let mut push_sin = |w: Rational, f: Rational| {
            if let Some((s, t)) = Trig::sin(f) {
                out.push((w * Rational::from(s), t));
            }
        };
        match (self, other) {
            (Trig::None, t) | (t, Trig::None) => return alloc::vec![(Rational::one(), t.clone())],
            (Trig::Sin(a), Trig::Cos(b)) => {
                push_sin(half.clone(), a + b);
                push_sin(half, a - b);
            }
            (Trig::Cos(a), Trig::Sin(b)) => {
                push_sin(half.clone(), a + b);
                push_sin(-half, a - b);
            }
            (Trig::Sin(a), Trig::Sin(b)) => {
                out.push((half.clone(), Trig::cos(a - b).1));
                out.push((-half, Trig::cos(a + b).1));
            }
            (Trig::Cos(a), Trig::Cos(b)) => {
                out.push((half.clone(), Trig::cos(a - b).1));
                out.push((half, Trig::cos(a + b).1));
            }
        }
        out
    }
}

/// The part of a basis term that depends on a single variable:
/// `t^power · e^{rate·t} · trig(t)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Factor {
    pub power: u32,
    pub rate: Rational,
    pub trig: Trig,
}

impl Factor {
    pub fn is_one(&self) -> bool {
        self.power == 0 && self.rate.is_zero() && self.trig == Trig::None
    }

    fn product(&self, other: &Factor) -> Vec<(Rational, Factor)> {
        let power = self.power + other.power;
        let rate = &self.rate + &other.rate;
        self.trig
            .product(&other.trig)
            .into_iter()
            .map(|(w, trig)| (w, Factor { power, rate: rate.clone(), trig }))
            .collect()
    }

    /// `d/dt` of the factor as weighted factors.
    fn derivative(&self) -> Vec<(Rational, Factor)> {
        let mut out = Vec::with_capacity(3);
        if self.power > 0 {
            out.push((Rational::from(self.power), Factor { power: self.power - 1, ..self.clone() }));
        }
        if !self.rate.is_zero() {
            out.push((self.rate.clone(), self.clone()));
        }
        match &self.trig {
            Trig::None => {}
            Trig::Sin(f) => out.push((f.clone(), Factor { trig: Trig::Cos(f.clone()), ..self.clone() })),
            Trig::Cos(f) => out.push((-f, Factor { trig: Trig::Sin(f.clone()), ..self.clone() })),
        }
        out
    }

    pub fn eval(&self, t: f64) -> f64 {
        let mut v = libm::exp(self.rate.to_f64() * t) * self.trig.eval(t);
        if self.power > 0 {
            v *= libm::pow(t, f64::from(self.power));
        }
        v
    }

    /// Value at `t = 0`: zero when a power of `t` or a sine is present.
    fn at_zero(&self) -> bool {
        self.power == 0 && !matches!(self.trig, Trig::Sin(_))
    }
}

/// Identity of a basis term: its ξ-factor and τ-factor.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Basis {
    pub xi: Factor,
    pub tau: Factor,
}

impl Basis {
    pub fn factor(&self, var: Var) -> &Factor {
        match var {
            Var::Xi => &self.xi,
            Var::Tau => &self.tau,
        }
    }
}

/// A basis term with its (nonzero) coefficient.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CanonicalTerm {
    pub coeff: Rational,
    pub basis: Basis,
}

/// Exact linear combination of basis terms with like terms merged and zero
/// coefficients dropped. The zero expression has no terms.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct CanonicalExpr {
    terms: BTreeMap<Basis, Rational>,
}

impl CanonicalExpr {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: impl Into<Rational>) -> Self {
        Self::term(c.into(), Basis::default())
    }

    pub fn term(coeff: Rational, basis: Basis) -> Self {
        let mut e = Self::zero();
        e.accumulate(basis, coeff);
        e
    }

    /// `coeff · ξ^px τ^py e^{ax ξ + ay τ}` with no trig factors.
    pub fn monomial(coeff: impl Into<Rational>, px: u32, py: u32, ax: Rational, ay: Rational) -> Self {
        Self::term(
            coeff.into(),
            Basis {
                xi: Factor { power: px, rate: ax, trig: Trig::None },
                tau: Factor { power: py, rate: ay, trig: Trig::None },
            },
        )
    }

    pub fn xi() -> Self {
        Self::monomial(1, 1, 0, Rational::zero(), Rational::zero())
    }

    pub fn tau() -> Self {
        Self::monomial(1, 0, 1, Rational::zero(), Rational::zero())
    }

    /// `e^{a ξ + b τ}`.
    pub fn exp(a: Rational, b: Rational) -> Self {
        Self::monomial(1, 0, 0, a, b)
    }

    pub fn sin(var: Var, freq: Rational) -> Self {
        match Trig::sin(freq) {
            None => Self::zero(),
            Some((s, trig)) => Self::single_var(Rational::from(s), var, Factor { trig, ..Factor::default() }),
        }
    }

    pub fn cos(var: Var, freq: Rational) -> Self {
        let (_, trig) = Trig::cos(freq);
        Self::single_var(Rational::one(), var, Factor { trig, ..Factor::default() })
    }

    pub fn single_var(coeff: Rational, var: Var, factor: Factor) -> Self {
        let basis = match var {
            Var::Xi => Basis { xi: factor, tau: Factor::default() },
            Var::Tau => Basis { xi: Factor::default(), tau: factor },
        };
        Self::term(coeff, basis)
    }

    fn accumulate(&mut self, basis: Basis, coeff: Rational) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(basis) {
            btree_map::Entry::Vacant(v) => {
                v.insert(coeff);
            }
            btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += &coeff;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Basis, &Rational)> {
        self.terms.iter()
    }

    pub fn terms(&self) -> impl Iterator<Item = CanonicalTerm> + '_ {
        self.terms.iter().map(|(b, c)| CanonicalTerm { coeff: c.clone(), basis: b.clone() })
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self { terms: self.terms.iter().map(|(b, k)| (b.clone(), k * c)).collect() }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (b, c) in &other.terms {
            out.accumulate(b.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (b, c) in &other.terms {
            out.accumulate(b.clone(), -c);
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (ba, ca) in &self.terms {
            for (bb, cb) in &other.terms {
                let c = ca * cb;
                let xs = ba.xi.product(&bb.xi);
                let ts = ba.tau.product(&bb.tau);
                for (wx, fx) in &xs {
                    for (wt, ft) in &ts {
                        out.accumulate(Basis { xi: fx.clone(), tau: ft.clone() }, &c * wx * wt);
                    }
                }
            }
        }
        out
    }

    pub fn pow(&self, exp: u32) -> Self {
        let mut acc = Self::constant(1);
        for _ in 0..exp {
            acc = acc.mul(self);
        }
        acc
    }

    /// Exact derivative with respect to `var`, applied `order` times.
    pub fn derivative(&self, var: Var, order: u32) -> Self {
        let mut cur = self.clone();
        for _ in 0..order {
            if cur.is_zero() {
                break;
            }
            let mut next = Self::zero();
            for (b, c) in &cur.terms {
                for (w, f) in b.factor(var).derivative() {
                    let basis = match var {
                        Var::Xi => Basis { xi: f, tau: b.tau.clone() },
                        Var::Tau => Basis { xi: b.xi.clone(), tau: f },
                    };
                    next.accumulate(basis, c * &w);
                }
            }
            cur = next;
        }
        cur
    }

    pub fn d_dxi(&self, order: u32) -> Self {
        self.derivative(Var::Xi, order)
    }

    pub fn d_dtau(&self, order: u32) -> Self {
        self.derivative(Var::Tau, order)
    }

    /// Substitutes `var = 0`; the result no longer depends on `var`.
    pub fn at_zero(&self, var: Var) -> Self {
        let mut out = Self::zero();
        for (b, c) in &self.terms {
            if !b.factor(var).at_zero() {
                continue;
            }
            let basis = match var {
                Var::Xi => Basis { xi: Factor::default(), tau: b.tau.clone() },
                Var::Tau => Basis { xi: b.xi.clone(), tau: Factor::default() },
            };
            out.accumulate(basis, c.clone());
        }
        out
    }

    /// True when no term depends on `var`.
    pub fn is_free_of(&self, var: Var) -> bool {
        self.terms.keys().all(|b| b.factor(var).is_one())
    }

    /// Largest exponential rate in `var` over all terms (0 for the zero expression).
    pub fn max_rate(&self, var: Var) -> Rational {
        self.terms.keys().map(|b| b.factor(var).rate.clone()).max().unwrap_or_else(Rational::zero)
    }

    /// Floating-point value at canonical coordinates `(ξ, τ)`.
    pub fn eval_canonical(&self, xi: f64, tau: f64) -> f64 {
        self.terms.iter().map(|(b, c)| c.to_f64() * b.xi.eval(xi) * b.tau.eval(tau)).sum()
    }

    /// Value at the raw point `(x, y)` for conformable orders `eta`, `gamma`.
    pub fn eval(&self, x: f64, y: f64, eta: f64, gamma: f64) -> Result<f64> {
        let xi = canonical_coordinate(x, eta)?;
        let tau = canonical_coordinate(y, gamma)?;
        Ok(self.eval_canonical(xi, tau))
    }
}

/// `t^order / order`, with `0^order = 0`.
pub fn canonical_coordinate(t: f64, order: f64) -> Result<f64> {
    if !(order > 0.0 && order <= 1.0) {
        return Err(Error::Domain(alloc::format!("order {order} outside (0, 1]")));
    }
    if t.is_nan() || t < 0.0 {
        return Err(Error::Domain(alloc::format!("negative coordinate {t}")));
    }
    if t == 0.0 {
        return Ok(0.0);
    }
    Ok(libm::pow(t, order) / order)
}

impl Add for &CanonicalExpr {
    type Output = CanonicalExpr;
    fn add(self, rhs: &CanonicalExpr) -> CanonicalExpr {
        CanonicalExpr::add(self, rhs)
    }
}

impl Sub for &CanonicalExpr {
    type Output = CanonicalExpr;
    fn sub(self, rhs: &CanonicalExpr) -> CanonicalExpr {
        CanonicalExpr::sub(self, rhs)
    }
}

impl Mul for &CanonicalExpr {
    type Output = CanonicalExpr;
    fn mul(self, rhs: &CanonicalExpr) -> CanonicalExpr {
        CanonicalExpr::mul(self, rhs)
    }
}

impl Neg for &CanonicalExpr {
    type Output = CanonicalExpr;
    fn neg(self) -> CanonicalExpr {
        self.scale(&Rational::from_int(-1))
    }
}

impl FromIterator<CanonicalTerm> for CanonicalExpr {
    fn from_iter<I: IntoIterator<Item = CanonicalTerm>>(iter: I) -> Self {
        let mut e = Self::zero();
        for t in iter {
            e.accumulate(t.basis, t.coeff);
        }
        e
    }
}
