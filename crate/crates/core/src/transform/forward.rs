use alloc::vec;

use crate::error::{Error, Result};
use crate::expr::{CanonicalExpr, Factor, Trig, Var};
use crate::poly::{Field, GaussianRational, Poly};
use crate::rational::Rational;

use super::{RationalFn, Roc, TVar, TransformExpr, TransformTerm};

/// Laplace image of `t^p e^{at} T(ct)` as `(numerator, denominator)` in `s`:
///
/// * no trig: `p! / (s - a)^{p+1}`
/// * trig: `p! (s - a + ic)^{p+1} / ((s - a)^2 + c^2)^{p+1}`, real part for
///   `cos`, imaginary part for `sin`.
pub fn laplace_factor(f: &Factor) -> (Poly<Rational>, Poly<Rational>) {
    let fact = Rational::factorial(f.power);
    let k = f.power + 1;
    match &f.trig {
        Trig::None => (Poly::constant(fact), Poly::linear_root(&f.rate).pow(k)),
        Trig::Sin(c) | Trig::Cos(c) => {
            // s - (a - ic)
            let shifted = Poly::<GaussianRational>::linear_root(&GaussianRational::new(f.rate.clone(), -c));
            let num = shifted.pow(k).scale(&GaussianRational::from_rational(&fact));
            let (re, im) = num.split_re_im();
            let quad = Poly::new(vec![&f.rate * &f.rate + c * c, Rational::from_int(-2) * &f.rate, Rational::one()]);
            let num = if matches!(f.trig, Trig::Cos(_)) { re } else { im };
            (num, quad.pow(k))
        }
    }
}

/// `(N, D) ↦ (1/t) · N(1/t) / D(1/t)` as a reduced rational function.
///
/// Maps a Laplace image in `s` to the Sumudu image in `ω` of the same
/// function, and back: the map is an involution.
pub fn laplace_sumudu_swap(num: &Poly<Rational>, den: &Poly<Rational>, var: TVar) -> RationalFn {
    if num.is_zero() {
        return RationalFn::constant(var, Rational::zero());
    }
    let (n, d) = (num.degree(), den.degree());
    let mut rn = num.reversed(n);
    let mut rd = den.reversed(d);
    // (1/t) N(1/t)/D(1/t) = t^{d-n-1} rev(N) / rev(D)
    let k = d as i64 - n as i64 - 1;
    if k >= 0 {
        rn = rn.shift_up(k as usize);
    } else {
        rd = rd.shift_up((-k) as usize);
    }
    RationalFn::new(var, rn, rd)
}

fn term_image(coeff: &Rational, xi: &Factor, tau: &Factor) -> TransformTerm {
    let (n, d) = laplace_factor(xi);
    let rv = RationalFn::new(TVar::V, n, d);
    let (n, d) = laplace_factor(tau);
    let qw = laplace_sumudu_swap(&n, &d, TVar::W);
    TransformTerm::new(coeff.clone(), rv, qw)
}

/// Forward transform of a class member. The class is closed under it.
pub fn forward(e: &CanonicalExpr) -> TransformExpr {
    let roc = Roc { a_max: e.max_rate(Var::Xi), b_max: e.max_rate(Var::Tau) };
    TransformExpr::from_terms(e.iter().map(|(b, c)| term_image(c, &b.xi, &b.tau)), roc)
}

/// Image of a function of one canonical variable under that variable's
/// transform alone: `F(v)` for a pure-ξ function, `H(ω)` for a pure-τ one.
/// These are the boundary and initial data images of the operational rules.
pub fn single_variable_image(e: &CanonicalExpr, var: Var) -> Result<TransformExpr> {
    let other = match var {
        Var::Xi => Var::Tau,
        Var::Tau => Var::Xi,
    };
    if !e.is_free_of(other) {
        return Err(Error::Domain(alloc::format!("expected a function of {var:?} only")));
    }
    let full = forward(e);
    Ok(match var {
        Var::Xi => full,
        // the double transform of h(τ) is (1/v)·H(ω)
        Var::Tau => full.mul_v(&RationalFn::power(TVar::V, 1)),
    })
}
