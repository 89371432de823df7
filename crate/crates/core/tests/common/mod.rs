#![allow(dead_code)]

use cdlst::{Basis, CanonicalExpr, Factor, NonlinearitySpec, Rational, Trig};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn r(n: i64) -> Rational {
    Rational::from_int(n)
}

/// Nonzero `p/q` with `|p| ≤ 5`, `q ≤ 3`.
pub fn coeff(rng: &mut ChaCha8Rng) -> Rational {
    loop {
        let p = rng.gen_range(-5i64..=5);
        if p != 0 {
            return Rational::new(p, rng.gen_range(1i64..=3));
        }
    }
}

pub fn rate(rng: &mut ChaCha8Rng) -> Rational {
    Rational::new(rng.gen_range(-2i64..=2), rng.gen_range(1i64..=2))
}

pub fn frequency(rng: &mut ChaCha8Rng) -> Rational {
    Rational::new(rng.gen_range(1i64..=3), rng.gen_range(1i64..=2))
}

pub fn factor(rng: &mut ChaCha8Rng, max_power: u32) -> Factor {
    let trig = match rng.gen_range(0..3) {
        0 => Trig::None,
        1 => Trig::Sin(frequency(rng)),
        _ => Trig::Cos(frequency(rng)),
    };
    Factor { power: rng.gen_range(0..=max_power), rate: rate(rng), trig }
}

pub fn basis_term(rng: &mut ChaCha8Rng, max_power: u32) -> CanonicalExpr {
    let basis = Basis { xi: factor(rng, max_power), tau: factor(rng, max_power) };
    CanonicalExpr::term(coeff(rng), basis)
}

/// Sum of `1..=max_terms` random basis terms.
pub fn class_expr(rng: &mut ChaCha8Rng, max_terms: usize, max_power: u32) -> CanonicalExpr {
    let n = rng.gen_range(1..=max_terms);
    (0..n).fold(CanonicalExpr::zero(), |acc, _| acc.add(&basis_term(rng, max_power)))
}

/// Pure-`var` expression.
pub fn single_var_expr(rng: &mut ChaCha8Rng, var: cdlst::Var, max_terms: usize) -> CanonicalExpr {
    let n = rng.gen_range(1..=max_terms);
    (0..n).fold(CanonicalExpr::zero(), |acc, _| acc.add(&CanonicalExpr::single_var(coeff(rng), var, factor(rng, 2))))
}

/// A point strictly inside the convergence region of `e`.
pub fn roc_point(rng: &mut ChaCha8Rng, e: &CanonicalExpr) -> (f64, f64) {
    let a = e.max_rate(cdlst::Var::Xi).to_f64();
    let b = e.max_rate(cdlst::Var::Tau).to_f64();
    let v = a + rng.gen_range(0.5..3.0);
    let inv_w = b.max(0.0) + rng.gen_range(0.5..3.0);
    (v, 1.0 / inv_w)
}

pub fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * b.abs().max(1e-300) || (a - b).abs() <= tol * 1e-3
}

/// Coefficients of the polynomial in λ through the points `(k, values[k])`,
/// `k = 0, 1, …`, by Newton forward differences.
pub fn interpolate(values: &[CanonicalExpr]) -> Vec<CanonicalExpr> {
    let n = values.len();
    let mut diffs: Vec<CanonicalExpr> = values.to_vec();
    let mut newton = Vec::with_capacity(n);
    for level in 0..n {
        newton.push(diffs[0].scale(&Rational::factorial(level as u32).recip()));
        diffs = diffs.windows(2).map(|w| w[1].sub(&w[0])).collect();
    }
    // Σ_k newton[k] · λ(λ−1)…(λ−k+1), expanded into powers of λ
    let mut coeffs = vec![CanonicalExpr::zero(); n];
    let mut falling: Vec<Rational> = vec![Rational::one()];
    for (k, c) in newton.iter().enumerate() {
        for (i, f) in falling.iter().enumerate() {
            coeffs[i] = coeffs[i].add(&c.scale(f));
        }
        let shift = Rational::from_int(-(k as i64));
        let mut next = vec![Rational::zero(); falling.len() + 1];
        for (i, f) in falling.iter().enumerate() {
            next[i + 1] += f;
            next[i] += &(f * &shift);
        }
        falling = next;
    }
    coeffs
}

pub fn random_spec(g: &mut rand_chacha::ChaCha8Rng) -> NonlinearitySpec {
    NonlinearitySpec {
        coeff: coeff(g),
        outer_dx: g.gen_range(0..=1),
        outer_dy: g.gen_range(0..=1),
        left_dx: g.gen_range(0..=1),
        left_dy: g.gen_range(0..=1),
        right_dx: g.gen_range(0..=1),
        right_dy: g.gen_range(0..=1),
    }
}
