mod common;

use cdlst::numeric::fd_conformable;
use cdlst::{CanonicalExpr, Direction, Var};
use common::{class_expr, rng};
use proptest::prelude::*;

fn expr(seed: u64) -> CanonicalExpr {
    class_expr(&mut rng(seed), 3, 2)
}

fn point_close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-9 * (1.0 + a.abs().max(b.abs()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_laws(sa in any::<u64>(), sb in any::<u64>(), sc in any::<u64>()) {
        let (a, b, c) = (expr(sa), expr(sb), expr(sc));
        prop_assert_eq!(a.add(&b), b.add(&a));
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        prop_assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        prop_assert!(a.sub(&a).is_zero());
        prop_assert_eq!(a.mul(&CanonicalExpr::constant(1)), a.clone());
    }

    #[test]
    fn operations_agree_pointwise(sa in any::<u64>(), sb in any::<u64>(), xi in 0.0f64..2.0, tau in 0.0f64..2.0) {
        let (a, b) = (expr(sa), expr(sb));
        let (fa, fb) = (a.eval_canonical(xi, tau), b.eval_canonical(xi, tau));
        prop_assert!(point_close(a.mul(&b).eval_canonical(xi, tau), fa * fb));
        prop_assert!(point_close(a.add(&b).eval_canonical(xi, tau), fa + fb));
        prop_assert!(point_close(a.pow(2).eval_canonical(xi, tau), fa * fa));
    }

    #[test]
    fn derivatives_are_linear_and_leibniz(sa in any::<u64>(), sb in any::<u64>()) {
        let (a, b) = (expr(sa), expr(sb));
        for var in [Var::Xi, Var::Tau] {
            prop_assert_eq!(a.add(&b).derivative(var, 1), a.derivative(var, 1).add(&b.derivative(var, 1)));
            let lhs = a.mul(&b).derivative(var, 1);
            let rhs = a.derivative(var, 1).mul(&b).add(&a.mul(&b.derivative(var, 1)));
            prop_assert_eq!(lhs, rhs);
            prop_assert_eq!(a.derivative(var, 2), a.derivative(var, 1).derivative(var, 1));
        }
        prop_assert_eq!(a.d_dxi(1).d_dtau(1), a.d_dtau(1).d_dxi(1));
    }
}

/// The conformable derivative `x^{1−η} ∂/∂x` by finite differences matches the
/// symbolic `d/dξ` on a 5 × 5 grid over [0.5, 2]² for η ∈ {0.6, 0.8, 1}.
#[test]
fn conformable_derivative_matches_finite_difference() {
    let grid: Vec<f64> = (0..5).map(|i| 0.5 + 1.5 * f64::from(i) / 4.0).collect();
    for seed in 0..10 {
        let e = class_expr(&mut rng(1000 + seed), 3, 2);
        for &order in &[0.6, 0.8, 1.0] {
            for &x in &grid {
                for &y in &grid {
                    for (dir, sym) in [(Direction::X, e.d_dxi(1)), (Direction::Y, e.d_dtau(1))] {
                        let fd = fd_conformable(&e, x, y, order, order, dir, 1e-5).unwrap();
                        let exact = sym.eval(x, y, order, order).unwrap();
                        assert!(
                            (fd - exact).abs() <= 1e-6 * exact.abs().max(1.0),
                            "{e:?}: {dir:?} at ({x}, {y}), order {order}: fd {fd} vs {exact}"
                        );
                    }
                }
            }
        }
    }
}
