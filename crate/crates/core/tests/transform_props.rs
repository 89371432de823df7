mod common;

use cdlst::numeric::{quad_forward, QuadratureConfig};
use cdlst::transform::{shift_check, single_variable_image};
use cdlst::{
    apply_kernel, derivative_rule, forward, inverse, CanonicalExpr, Direction, LinearOperator, OperatorTerm, Rational,
    TransformExpr, Var,
};
use common::{basis_term, class_expr, coeff, r, rate, rel_close, rng, roc_point};
use rand::Rng;

#[test]
fn round_trip_is_exact() {
    let mut g = rng(7);
    for _ in 0..50 {
        let e = class_expr(&mut g, 4, 3);
        let back = inverse(&forward(&e)).unwrap_or_else(|err| panic!("{e:?}: {err}"));
        assert_eq!(back, e);
    }
}

#[test]
fn forward_matches_quadrature() {
    let cfg = QuadratureConfig::default();
    let mut g = rng(11);
    for _ in 0..20 {
        let e = basis_term(&mut g, 3);
        let image = forward(&e);
        for _ in 0..5 {
            let (v, w) = roc_point(&mut g, &e);
            let exact = image.eval(v, w).unwrap();
            let quad = quad_forward(&e, v, w, &cfg).unwrap();
            assert!(rel_close(quad, exact, 1e-6), "{e:?} at ({v}, {w}): {quad} vs {exact}");
        }
    }
}

fn boundary_images(psi: &CanonicalExpr, direction: Direction, order: u32) -> Vec<TransformExpr> {
    (0..order)
        .map(|k| match direction {
            Direction::X => single_variable_image(&psi.d_dxi(k).at_zero(Var::Xi), Var::Tau).unwrap(),
            Direction::Y => single_variable_image(&psi.d_dtau(k).at_zero(Var::Tau), Var::Xi).unwrap(),
        })
        .collect()
}

#[test]
fn derivative_rule_reproduces_forward_of_derivative() {
    let mut g = rng(13);
    for i in 0..20 {
        let psi = class_expr(&mut g, 3, 2);
        let direction = if i % 2 == 0 { Direction::X } else { Direction::Y };
        let order = g.gen_range(1..=3);
        let images = boundary_images(&psi, direction, order);
        let rule = derivative_rule(&forward(&psi), direction, order, &images).unwrap();
        let derivative = match direction {
            Direction::X => psi.d_dxi(order),
            Direction::Y => psi.d_dtau(order),
        };
        assert!(rule.equivalent(&forward(&derivative)), "{psi:?} {direction:?}^{order}");
    }
}

#[test]
fn forward_is_linear() {
    let mut g = rng(17);
    for _ in 0..20 {
        let (a, b) = (class_expr(&mut g, 3, 2), class_expr(&mut g, 3, 2));
        let (c, d) = (coeff(&mut g), coeff(&mut g));
        let lhs = forward(&a.scale(&c).add(&b.scale(&d)));
        let rhs = forward(&a).scale(&c).add(&forward(&b).scale(&d));
        assert!(lhs.equivalent(&rhs));
    }
}

#[test]
fn existence_bound() {
    let mut g = rng(19);
    for _ in 0..20 {
        let e = basis_term(&mut g, 3);
        let (b, c) = e.iter().next().unwrap();
        let (a, bb) = (b.xi.rate.to_f64(), b.tau.rate.to_f64());
        let (p, q) = (b.xi.power, b.tau.power);
        let k = c.to_f64().abs() * Rational::factorial(p).to_f64() * Rational::factorial(q).to_f64();
        for _ in 0..5 {
            let (v, w) = roc_point(&mut g, &e);
            let bound = k / (v - a).powi(p as i32 + 1) * w.powi(q as i32) / (1.0 - bb * w).powi(q as i32 + 1);
            let value = forward(&e).eval(v, w).unwrap();
            assert!(value.abs() <= bound * (1.0 + 1e-12), "{e:?}: |{value}| > {bound}");
        }
    }
}

fn random_operator(g: &mut rand_chacha::ChaCha8Rng) -> LinearOperator {
    let mut terms = Vec::new();
    let n = g.gen_range(1..=3);
    for _ in 0..n {
        let order = g.gen_range(1..=2);
        let (dx_order, dy_order) = if g.gen_bool(0.5) { (order, 0) } else { (0, order) };
        terms.push(OperatorTerm { coeff: coeff(g), dx_order, dy_order });
    }
    LinearOperator::new(terms).unwrap_or_else(|_| random_operator(g))
}

/// Kernel applied to the transformed equation `L ψ` plus its boundary terms
/// gives back the image of `ψ`.
#[test]
fn kernel_inverts_the_operator() {
    let mut g = rng(23);
    for _ in 0..20 {
        let op = random_operator(&mut g);
        let psi = class_expr(&mut g, 2, 2);
        let mut lpsi = CanonicalExpr::zero();
        let mut boundary = TransformExpr::zero();
        for t in op.terms() {
            lpsi = lpsi.add(&psi.d_dxi(t.dx_order).d_dtau(t.dy_order).scale(&t.coeff));
            let (dir, order) = if t.dx_order > 0 { (Direction::X, t.dx_order) } else { (Direction::Y, t.dy_order) };
            // boundary part of the rule: rule(ψ) = σ_t Ψ − B_t
            let images = boundary_images(&psi, dir, order);
            let rule = derivative_rule(&forward(&psi), dir, order, &images).unwrap();
            let zero_bc: Vec<TransformExpr> = (0..order).map(|_| TransformExpr::zero()).collect();
            let pure = derivative_rule(&forward(&psi), dir, order, &zero_bc).unwrap();
            boundary = boundary.add(&pure.sub(&rule).scale(&t.coeff));
        }
        let rhs = forward(&lpsi).add(&boundary);
        let out = apply_kernel(&op, &rhs).unwrap_or_else(|e| panic!("{op:?} {psi:?}: {e}"));
        assert!(out.equivalent(&forward(&psi)));
        for _ in 0..5 {
            let (v, w) = roc_point(&mut g, &psi);
            let direct = rhs.eval(v, w).unwrap() / op.symbol_at(v, w);
            if let Ok(value) = out.eval(v, w) {
                assert!((value - direct).abs() <= 1e-10 * direct.abs().max(1.0), "{value} vs {direct}");
            }
        }
    }
}

#[test]
fn first_shifting() {
    let mut g = rng(29);
    for _ in 0..20 {
        let f = class_expr(&mut g, 3, 2);
        let (c, d) = (rate(&mut g), rate(&mut g));
        // a point whose unshifted image (v − c, w/(1 − dw)) also lies in the region
        let (v, w) = loop {
            let (v0, w0) = roc_point(&mut g, &f);
            let inv_w = 1.0 / w0 + d.to_f64();
            if inv_w > 0.0 {
                break (v0 + c.to_f64(), 1.0 / inv_w);
            }
        };
        let (lhs, rhs) = shift_check(&f, &c, &d, v, w).unwrap();
        assert!((lhs - rhs).abs() <= 1e-10 * lhs.abs().max(1.0), "{f:?} c={c} d={d}: {lhs} vs {rhs}");
    }
    let (lhs, rhs) = shift_check(&CanonicalExpr::constant(1), &r(1), &r(-2), 3.0, 0.25).unwrap();
    assert!((lhs - 1.0 / 3.0).abs() < 1e-14 && (rhs - 1.0 / 3.0).abs() < 1e-14);
}
