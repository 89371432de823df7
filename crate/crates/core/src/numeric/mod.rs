//! Floating-point oracles and report data: quadrature of the transform
//! integral, finite-difference conformable derivatives, error tables and
//! surface grids.

mod quad;

pub use quad::integrate;

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::expr::{canonical_coordinate, CanonicalExpr, Factor, Var};
use crate::transform::Direction;

/// Tolerances and truncation for [`quad_forward`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    /// Integrands are cut off where `t^p e^{−(rate margin)·t}` falls below this.
    pub truncation: f64,
    pub max_subdivisions: usize,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self { abs_tol: 1e-9, rel_tol: 1e-9, truncation: 1e-12, max_subdivisions: 2000 }
    }
}

/// Smallest `T` with `T^p e^{−rT} ≤ eps`, by fixed-point iteration.
fn horizon(p: u32, r: f64, eps: f64) -> f64 {
    let base = -libm::log(eps);
    let mut t = base / r;
    for _ in 0..50 {
        t = (base + f64::from(p) * libm::log(t.max(1.0))) / r;
    }
    t
}

/// `∫_0^∞ e^{−s t} f(t) dt` for one factor, `s` strictly above its rate.
fn laplace_numeric(f: &Factor, s: f64, cfg: &QuadratureConfig) -> Result<f64> {
    let r = s - f.rate.to_f64();
    let t = horizon(f.power, r, cfg.truncation);
    integrate(|t| libm::exp(-s * t) * f.eval(t), 0.0, t, cfg.abs_tol, cfg.rel_tol, cfg.max_subdivisions)
}

/// Same integral after the substitution `t = x^order / order`, integrated in
/// the raw variable with weight `x^{order−1}`.
fn laplace_numeric_raw(f: &Factor, s: f64, order: f64, cfg: &QuadratureConfig) -> Result<f64> {
    let r = s - f.rate.to_f64();
    let t = horizon(f.power, r, cfg.truncation);
    let x_max = libm::pow(order * t, 1.0 / order);
    integrate(
        |x| {
            let t = libm::pow(x, order) / order;
            libm::exp(-s * t) * f.eval(t) * libm::pow(x, order - 1.0)
        },
        0.0,
        x_max,
        cfg.abs_tol,
        cfg.rel_tol,
        cfg.max_subdivisions,
    )
}

fn check_roc(e: &CanonicalExpr, v: f64, w: f64) -> Result<()> {
    let a = e.max_rate(Var::Xi).to_f64();
    let b = e.max_rate(Var::Tau).to_f64();
    if w > 0.0 && v > a && 1.0 / w > b {
        Ok(())
    } else {
        Err(Error::OutsideRoc)
    }
}

/// The transform integral `(1/w) ∫∫ e^{−vξ − τ/w} e(ξ, τ) dξ dτ` by adaptive
/// quadrature, one separable basis term at a time.
pub fn quad_forward(e: &CanonicalExpr, v: f64, w: f64, cfg: &QuadratureConfig) -> Result<f64> {
    check_roc(e, v, w)?;
    let mut total = 0.0;
    for (b, c) in e.iter() {
        let lx = laplace_numeric(&b.xi, v, cfg)?;
        let ly = laplace_numeric(&b.tau, 1.0 / w, cfg)? / w;
        total += c.to_f64() * lx * ly;
    }
    Ok(total)
}

/// [`quad_forward`] computed in raw variables `(x, y)` with the conformable
/// weights `x^{η−1} y^{γ−1}`. Agrees with it for every order.
pub fn quad_forward_raw(
    e: &CanonicalExpr,
    v: f64,
    w: f64,
    eta: f64,
    gamma: f64,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    check_roc(e, v, w)?;
    for order in [eta, gamma] {
        if !(order > 0.0 && order <= 1.0) {
            return Err(Error::Domain(alloc::format!("order {order} outside (0, 1]")));
        }
    }
    let mut total = 0.0;
    for (b, c) in e.iter() {
        let lx = laplace_numeric_raw(&b.xi, v, eta, cfg)?;
        let ly = laplace_numeric_raw(&b.tau, 1.0 / w, gamma, cfg)? / w;
        total += c.to_f64() * lx * ly;
    }
    Ok(total)
}

/// `t^{1−order} ∂/∂t` of `e` at the raw point by a central difference of width `step`.
pub fn fd_conformable(
    e: &CanonicalExpr,
    x: f64,
    y: f64,
    eta: f64,
    gamma: f64,
    direction: Direction,
    step: f64,
) -> Result<f64> {
    if [step, x, y].iter().any(|t| t.is_nan()) || step <= 0.0 || x <= step || y <= step {
        return Err(Error::Domain(alloc::format!("need x, y > step > 0, got x = {x}, y = {y}, step = {step}")));
    }
    Ok(match direction {
        Direction::X => {
            let d = (e.eval(x + step, y, eta, gamma)? - e.eval(x - step, y, eta, gamma)?) / (2.0 * step);
            libm::pow(x, 1.0 - eta) * d
        }
        Direction::Y => {
            let d = (e.eval(x, y + step, eta, gamma)? - e.eval(x, y - step, eta, gamma)?) / (2.0 * step);
            libm::pow(y, 1.0 - gamma) * d
        }
    })
}

/// One line of an error table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorTableRow {
    pub x: f64,
    pub y: f64,
    pub eta: f64,
    pub gamma: f64,
    pub exact: f64,
    pub cdlsmd: f64,
    pub abs_error: f64,
}

/// Compares `solution` at each order against `exact` at integer order, for
/// every order, then every `x`, then every `y`.
pub fn make_error_table(
    solution: &CanonicalExpr,
    exact: &CanonicalExpr,
    xs: &[f64],
    ys: &[f64],
    orders: &[(f64, f64)],
) -> Result<Vec<ErrorTableRow>> {
    let mut rows = Vec::with_capacity(orders.len() * xs.len() * ys.len());
    for &(eta, gamma) in orders {
        for &x in xs {
            for &y in ys {
                let ex = exact.eval(x, y, 1.0, 1.0)?;
                let approx = solution.eval(x, y, eta, gamma)?;
                rows.push(ErrorTableRow {
                    x,
                    y,
                    eta,
                    gamma,
                    exact: ex,
                    cdlsmd: approx,
                    abs_error: libm::fabs(ex - approx),
                });
            }
        }
    }
    Ok(rows)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurfacePoint {
    pub x: f64,
    pub y: f64,
    pub value: f64,
}

fn linspace(range: (f64, f64), n: usize) -> Vec<f64> {
    if n == 1 {
        return alloc::vec![range.0];
    }
    (0..n).map(|i| range.0 + (range.1 - range.0) * i as f64 / (n - 1) as f64).collect()
}

/// Values of `e` on an `n × n` grid spanning both ranges inclusively; `x` is
/// the outer index.
pub fn surface(
    e: &CanonicalExpr,
    x_range: (f64, f64),
    y_range: (f64, f64),
    resolution: usize,
    eta: f64,
    gamma: f64,
) -> Result<Vec<SurfacePoint>> {
    if resolution == 0 {
        return Err(Error::Domain("resolution must be positive".into()));
    }
    for r in [x_range, y_range] {
        if !(r.0 >= 0.0 && r.1 > r.0) {
            return Err(Error::Domain(alloc::format!("invalid range [{}, {}]", r.0, r.1)));
        }
    }
    let ys = linspace(y_range, resolution);
    let mut out = Vec::with_capacity(resolution * resolution);
    for x in linspace(x_range, resolution) {
        for &y in &ys {
            out.push(SurfacePoint { x, y, value: e.eval(x, y, eta, gamma)? });
        }
    }
    Ok(out)
}

/// `max |e|` over the grid `xs × ys`.
pub fn grid_max_abs(e: &CanonicalExpr, xs: &[f64], ys: &[f64], eta: f64, gamma: f64) -> Result<f64> {
    let mut m: f64 = 0.0;
    for &x in xs {
        for &y in ys {
            m = m.max(libm::fabs(e.eval(x, y, eta, gamma)?));
        }
    }
    Ok(m)
}

/// Canonical coordinates of a raw point.
pub fn to_canonical(x: f64, y: f64, eta: f64, gamma: f64) -> Result<(f64, f64)> {
    Ok((canonical_coordinate(x, eta)?, canonical_coordinate(y, gamma)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::Rational;
    use crate::transform::forward;

    fn r(n: i64) -> Rational {
        Rational::from_int(n)
    }

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * b.abs().max(1.0)
    }

    #[test]
    fn quadrature_examples() {
        let cfg = QuadratureConfig::default();
        let one = CanonicalExpr::constant(1);
        assert!(close(quad_forward(&one, 2.0, 0.5, &cfg).unwrap(), 0.5, 1e-9));
        let ss = CanonicalExpr::sin(Var::Xi, r(1)).mul(&CanonicalExpr::sin(Var::Tau, r(1)));
        assert!(close(quad_forward(&ss, 1.0, 1.0, &cfg).unwrap(), 0.25, 1e-9));
        let m = CanonicalExpr::monomial(1, 2, 2, r(0), r(0));
        assert!(close(quad_forward(&m, 2.0, 0.5, &cfg).unwrap(), 0.125, 1e-9));
    }

    #[test]
    fn quadrature_matches_symbolic_image() {
        let cfg = QuadratureConfig::default();
        let e = CanonicalExpr::exp(Rational::new(1, 2), r(-1))
            .mul(&CanonicalExpr::cos(Var::Xi, r(3)))
            .mul(&CanonicalExpr::monomial(2, 1, 2, r(0), r(0)));
        for &(v, w) in &[(1.0, 0.5), (2.5, 0.1), (0.8, 2.0)] {
            let exact = forward(&e).eval(v, w).unwrap();
            assert!(close(quad_forward(&e, v, w, &cfg).unwrap(), exact, 1e-7));
        }
    }

    #[test]
    fn raw_variable_quadrature_is_order_independent() {
        let cfg = QuadratureConfig::default();
        let e = CanonicalExpr::exp(r(0), r(-1)).mul(&CanonicalExpr::sin(Var::Xi, r(1)));
        let reference = quad_forward(&e, 1.5, 0.4, &cfg).unwrap();
        for &order in &[1.0, 0.8, 0.5] {
            let raw = quad_forward_raw(&e, 1.5, 0.4, order, order, &cfg).unwrap();
            assert!(close(raw, reference, 1e-7), "order {order}: {raw} vs {reference}");
        }
    }

    #[test]
    fn outside_roc() {
        let cfg = QuadratureConfig::default();
        let e = CanonicalExpr::exp(r(2), r(0));
        assert_eq!(quad_forward(&e, 1.0, 0.5, &cfg), Err(Error::OutsideRoc));
        assert_eq!(quad_forward(&e, 3.0, -0.5, &cfg), Err(Error::OutsideRoc));
    }

    #[test]
    fn finite_differences() {
        let xi = CanonicalExpr::xi();
        for &(x, eta) in &[(0.7, 0.6), (1.3, 0.9), (2.0, 1.0)] {
            let d = fd_conformable(&xi, x, 1.0, eta, 1.0, Direction::X, 1e-5).unwrap();
            assert!((d - 1.0).abs() < 1e-8);
        }
        let c = CanonicalExpr::constant(3);
        assert!(fd_conformable(&c, 1.0, 1.0, 0.5, 0.5, Direction::Y, 1e-5).unwrap().abs() < 1e-9);
        let e = CanonicalExpr::exp(r(0), r(-1)).mul(&CanonicalExpr::sin(Var::Xi, r(1)));
        let fd = fd_conformable(&e, 1.0, 0.5, 0.8, 0.8, Direction::X, 1e-5).unwrap();
        let sym = e.d_dxi(1).eval(1.0, 0.5, 0.8, 0.8).unwrap();
        assert!((fd - sym).abs() < 1e-6);
        assert!(fd_conformable(&e, 1e-6, 0.5, 0.8, 0.8, Direction::X, 1e-5).is_err());
    }

    #[test]
    fn error_table_row() {
        let sol = CanonicalExpr::exp(r(0), r(-1)).mul(&CanonicalExpr::sin(Var::Xi, r(1)));
        let rows = make_error_table(&sol, &sol, &[1.0], &[0.1, 0.2], &[(0.8, 0.8), (1.0, 1.0)]).unwrap();
        assert_eq!(rows.len(), 4);
        let first = rows[0];
        assert!((first.exact - 0.761394).abs() < 1e-6);
        assert!((first.cdlsmd - 0.778431).abs() < 1e-4);
        assert_eq!(first.abs_error, (first.exact - first.cdlsmd).abs());
        assert!(rows[2..].iter().all(|r| r.abs_error == 0.0));
    }

    #[test]
    fn surfaces() {
        let z = surface(&CanonicalExpr::zero(), (0.0, 2.0), (0.0, 2.0), 5, 0.9, 0.9).unwrap();
        assert_eq!(z.len(), 25);
        assert!(z.iter().all(|p| p.value == 0.0));
        let m = CanonicalExpr::monomial(1, 2, 2, r(0), r(0));
        let g = surface(&m, (0.0, 2.0), (0.0, 2.0), 3, 1.0, 1.0).unwrap();
        assert_eq!(g[4], SurfacePoint { x: 1.0, y: 1.0, value: 1.0 });
        assert!(surface(&m, (1.0, 0.5), (0.0, 1.0), 3, 1.0, 1.0).is_err());
    }
}
