//! Table inversion by exact partial fractions.
//!
//! Denominators are factored over `Q(i)`: each square-free part is split
//! into rational linear factors and rational quadratics with Gaussian
//! rational roots. Candidate factors come from floating-point root estimates
//! but every factor is accepted only after exact division, so the inversion
//! is exact or fails loudly.

use alloc::format;
use alloc::vec::Vec;

use num_traits::Signed;

use crate::error::{Error, Result};
use crate::expr::{CanonicalExpr, Factor, Trig, Var};
use crate::poly::{Field, GaussianRational, Poly};
use crate::rational::Rational;

use super::forward::laplace_sumudu_swap;
use super::{RationalFn, TVar, TransformExpr};

/// Exact square root of a nonnegative rational, when it is rational.
fn rational_sqrt(r: &Rational) -> Option<Rational> {
    if r.is_negative() {
        return None;
    }
    let (n, d) = (r.numer(), r.denom());
    let sn = n.sqrt();
    let sd = d.sqrt();
    (&sn * &sn == *n && &sd * &sd == *d).then(|| Rational::from_bigints(sn, sd))
}

/// Roots of a monic quadratic `t^2 + b t + c` when they lie in `Q(i)`.
fn quadratic_roots(b: &Rational, c: &Rational) -> Option<[GaussianRational; 2]> {
    let disc = b * b - Rational::from_int(4) * c;
    let half = Rational::new(1, 2);
    let re = -(b * &half);
    if disc.is_negative() {
        let s = rational_sqrt(&-&disc)?;
        let im = &s * &half;
        Some([GaussianRational::new(re.clone(), im.clone()), GaussianRational::new(re, -im)])
    } else {
        let s = rational_sqrt(&disc)?;
        let d = &s * &half;
        Some([GaussianRational::new(&re + &d, Rational::zero()), GaussianRational::new(&re - &d, Rational::zero())])
    }
}

#[derive(Clone, Copy, Debug)]
struct C64 {
    re: f64,
    im: f64,
}

impl C64 {
    fn add(self, o: C64) -> C64 {
        C64 { re: self.re + o.re, im: self.im + o.im }
    }
    fn sub(self, o: C64) -> C64 {
        C64 { re: self.re - o.re, im: self.im - o.im }
    }
    fn mul(self, o: C64) -> C64 {
        C64 { re: self.re * o.re - self.im * o.im, im: self.re * o.im + self.im * o.re }
    }
    fn div(self, o: C64) -> C64 {
        let n = o.re * o.re + o.im * o.im;
        C64 { re: (self.re * o.re + self.im * o.im) / n, im: (self.im * o.re - self.re * o.im) / n }
    }
    fn abs(self) -> f64 {
        libm::hypot(self.re, self.im)
    }
}

/// Durand–Kerner estimates of all roots of a monic polynomial.
fn numeric_roots(p: &Poly<Rational>) -> Vec<C64> {
    let coeffs: Vec<f64> = p.monic().coeffs().iter().map(Rational::to_f64).collect();
    let n = coeffs.len() - 1;
    let radius = 1.0 + coeffs[..n].iter().fold(0.0f64, |m, c| m.max(c.abs()));
    let seed = C64 { re: 0.4, im: 0.9 };
    let mut z: Vec<C64> = Vec::with_capacity(n);
    let mut cur = C64 { re: 1.0, im: 0.0 };
    for _ in 0..n {
        cur = cur.mul(seed);
        z.push(C64 { re: cur.re * radius, im: cur.im * radius });
    }
    let eval =
        |x: C64| coeffs.iter().rev().fold(C64 { re: 0.0, im: 0.0 }, |acc, &c| acc.mul(x).add(C64 { re: c, im: 0.0 }));
    for _ in 0..2000 {
        let mut delta = 0.0f64;
        for i in 0..n {
            let mut den = C64 { re: 1.0, im: 0.0 };
            for j in 0..n {
                if i != j {
                    den = den.mul(z[i].sub(z[j]));
                }
            }
            if den.abs() == 0.0 {
                den = C64 { re: 1e-12, im: 0.0 };
            }
            let step = eval(z[i]).div(den);
            z[i] = z[i].sub(step);
            delta = delta.max(step.abs());
        }
        if delta < 1e-15 {
            break;
        }
    }
    z
}

/// Rational candidates close to `x`, smallest denominator first.
fn rational_candidates(x: f64) -> Vec<Rational> {
    let tol = 1e-7 * x.abs().max(1.0);
    Rational::convergents(x, 1_000_000).into_iter().filter(|c| (c.to_f64() - x).abs() < tol).collect()
}

/// Splits one square-free rational polynomial into its `Q(i)` roots.
fn roots_of_square_free(p: &Poly<Rational>) -> Result<Vec<GaussianRational>> {
    let mut rest = p.monic();
    let mut roots = Vec::new();
    while rest.degree() > 2 {
        let estimates = numeric_roots(&rest);
        let mut found = None;
        'search: for z in &estimates {
            if z.im.abs() < 1e-6 {
                for r in rational_candidates(z.re) {
                    let lin = Poly::linear_root(&r);
                    if let Some(q) = rest.exact_div(&lin) {
                        found = Some((lin, q));
                        break 'search;
                    }
                }
            } else {
                // t^2 - 2 Re z · t + |z|^2
                let bs = rational_candidates(-2.0 * z.re);
                let cs = rational_candidates(z.re * z.re + z.im * z.im);
                for b in &bs {
                    for c in &cs {
                        let quad = Poly::new(alloc::vec![c.clone(), b.clone(), Rational::one()]);
                        if let Some(q) = rest.exact_div(&quad) {
                            found = Some((quad, q));
                            break 'search;
                        }
                    }
                }
            }
        }
        let (factor, quotient) = found.ok_or_else(|| {
            Error::OutOfClass(format!("denominator factor {rest:?} has no rational or Gaussian-rational root"))
        })?;
        roots.extend(roots_of_square_free(&factor)?);
        rest = quotient;
    }
    match rest.degree() {
        0 => {}
        1 => roots.push(GaussianRational::from_rational(&-rest.coeff(0))),
        _ => {
            let rs = quadratic_roots(&rest.coeff(1), &rest.coeff(0))
                .ok_or_else(|| Error::OutOfClass(format!("quadratic factor {rest:?} has irrational roots")))?;
            roots.extend(rs);
        }
    }
    Ok(roots)
}

/// Distinct poles of a denominator with multiplicities.
pub fn poles(den: &Poly<Rational>) -> Result<Vec<(GaussianRational, u32)>> {
    let mut out = Vec::new();
    for (part, mult) in den.square_free() {
        for r in roots_of_square_free(&part)? {
            out.push((r, mult));
        }
    }
    Ok(out)
}

/// Laurent coefficients `c_1..c_k` of `N/D` at a pole `r` of order `k`
/// (`c_j` multiplies `1/(t - r)^j`).
fn laurent_coefficients(
    num: &Poly<GaussianRational>,
    den: &Poly<GaussianRational>,
    r: &GaussianRational,
    k: u32,
) -> Vec<GaussianRational> {
    let lin = Poly::linear_root(r);
    let rest = den.exact_div(&lin.pow(k)).expect("pole multiplicity");
    let n = num.taylor_shift(r);
    let d = rest.taylor_shift(r);
    let d0 = d.coeff(0);
    let k = k as usize;
    // series of n/d around t = r up to order k-1
    let mut q: Vec<GaussianRational> = Vec::with_capacity(k);
    for m in 0..k {
        let mut acc = n.coeff(m);
        for l in 1..=m {
            acc = acc.sub(&d.coeff(l).mul(&q[m - l]));
        }
        q.push(acc.div(&d0));
    }
    // q_m is the coefficient of (t-r)^{m-k}, i.e. c_{k-m}
    q.reverse();
    q
}

/// Inverse Laplace transform of a proper rational function, as a function of `var`.
pub fn inverse_laplace(rf: &RationalFn, var: Var) -> Result<CanonicalExpr> {
    if rf.is_zero() {
        return Ok(CanonicalExpr::zero());
    }
    if !rf.is_proper() {
        return Err(Error::OutOfClass(format!("improper image {rf} has no preimage in the class")));
    }
    let num = rf.num().to_gaussian();
    let den = rf.den().to_gaussian();
    let mut out = CanonicalExpr::zero();
    for (r, k) in poles(rf.den())? {
        if r.im.is_negative() {
            continue;
        }
        for (idx, c) in laurent_coefficients(&num, &den, &r, k).into_iter().enumerate() {
            let j = idx as u32 + 1;
            let power = j - 1;
            let fact = Rational::factorial(power).recip();
            if r.is_real() {
                let f = Factor { power, rate: r.re.clone(), trig: Trig::None };
                debug_assert!(c.im.is_zero());
                out = out.add(&CanonicalExpr::single_var(&c.re * &fact, var, f));
            } else {
                // c e^{(a+ib)t} + conj = 2 e^{at} (Re c cos bt - Im c sin bt)
                let two = Rational::from_int(2) * &fact;
                let cos = Factor { power, rate: r.re.clone(), trig: Trig::Cos(r.im.clone()) };
                let sin = Factor { power, rate: r.re.clone(), trig: Trig::Sin(r.im.clone()) };
                out = out.add(&CanonicalExpr::single_var(&two * &c.re, var, cos)).add(&CanonicalExpr::single_var(
                    -(&two * &c.im),
                    var,
                    sin,
                ));
            }
        }
    }
    Ok(out)
}

/// Inverse Sumudu transform of an image in `ω`, as a function of `var`.
pub fn inverse_sumudu(rf: &RationalFn, var: Var) -> Result<CanonicalExpr> {
    let laplace = laplace_sumudu_swap(rf.num(), rf.den(), TVar::V);
    inverse_laplace(&laplace, var).map_err(|e| match e {
        Error::OutOfClass(_) if !laplace.is_proper() => {
            Error::OutOfClass(format!("Sumudu image {rf} has no table preimage"))
        }
        e => e,
    })
}

/// Term-by-term inversion of a separable image back to the expression class.
pub fn inverse(t: &TransformExpr) -> Result<CanonicalExpr> {
    let mut out = CanonicalExpr::zero();
    for term in t.terms() {
        let x = inverse_laplace(&term.rv, Var::Xi)?;
        let y = inverse_sumudu(&term.qw, Var::Tau)?;
        out = out.add(&x.mul(&y).scale(&term.coeff));
    }
    Ok(out)
}
