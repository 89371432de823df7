//! JSON and CSV output.

use std::fmt::Write as _;

use cdlst::numeric::{ErrorTableRow, SurfacePoint};
use cdlst::transform::TransformExpr;
use cdlst::{SeriesSolution, Status};
use serde::Serialize;

use crate::parse::render;

/// `value` with 6 significant digits in the style of C's `%g`.
pub fn fmt_g(value: f64) -> String {
    if value == 0.0 {
        return "0".into();
    }
    if !value.is_finite() {
        return format!("{value}");
    }
    let sci = format!("{value:.5e}");
    let (mantissa, exp) = sci.split_once('e').expect("scientific notation");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..6).contains(&exp) {
        let mantissa = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        return format!("{mantissa}e{sign}{:02}", exp.abs());
    }
    let decimals = (5 - exp) as usize;
    trim_zeros(&format!("{value:.decimals$}")).into()
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

pub fn status_text(status: &Status) -> String {
    match status {
        Status::Converged(k) => format!("Converged({k})"),
        Status::Truncated(k) => format!("Truncated({k})"),
        Status::Failed(reason) => format!("Failed({reason})"),
    }
}

#[derive(Debug, Serialize)]
pub struct SolveReport {
    pub name: String,
    pub status: String,
    pub components: Vec<String>,
    pub assembled: String,
    pub residual_max: f64,
}

impl SolveReport {
    pub fn new(name: &str, sol: &SeriesSolution, residual_max: f64) -> Self {
        Self {
            name: name.into(),
            status: status_text(&sol.status),
            components: sol.components.iter().map(render).collect(),
            assembled: render(&sol.assembled),
            residual_max,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct Roc {
    pub a_max: String,
    pub b_max: String,
}

#[derive(Debug, Serialize)]
pub struct TransformReport {
    pub expr: String,
    pub image: String,
    pub terms: Vec<String>,
    pub roc: Roc,
}

impl TransformReport {
    pub fn new(expr: &cdlst::CanonicalExpr, image: &TransformExpr) -> Self {
        Self {
            expr: render(expr),
            image: image.to_string(),
            terms: image.terms().iter().map(ToString::to_string).collect(),
            roc: Roc { a_max: image.roc.a_max.to_string(), b_max: image.roc.b_max.to_string() },
        }
    }
}

#[derive(Debug, Serialize)]
pub struct VerifyReport {
    pub name: String,
    pub candidate: String,
    pub residual: String,
    pub residual_zero: bool,
    pub initial_conditions: Vec<bool>,
    pub boundary_conditions: Vec<bool>,
    /// Largest `|residual|` on the check grid, per `(eta, gamma)`.
    pub grid_max_abs: Vec<(f64, f64, f64)>,
    pub certified: bool,
}

pub fn error_table_csv(rows: &[ErrorTableRow]) -> String {
    let mut out = String::from("x,y,eta,gamma,exact,cdlsmd,abs_error\n");
    for r in rows {
        let cells = [r.x, r.y, r.eta, r.gamma, r.exact, r.cdlsmd, r.abs_error].map(fmt_g);
        let _ = writeln!(out, "{}", cells.join(","));
    }
    out
}

pub fn surface_csv(points: &[SurfacePoint]) -> String {
    let mut out = String::from("x,y,value\n");
    for p in points {
        let _ = writeln!(out, "{},{},{}", fmt_g(p.x), fmt_g(p.y), fmt_g(p.value));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn g_format() {
        assert_eq!(fmt_g(0.0), "0");
        assert_eq!(fmt_g(1.0), "1");
        assert_eq!(fmt_g(0.778_436_9), "0.778437");
        assert_eq!(fmt_g(0.017_037_2), "0.0170372");
        assert_eq!(fmt_g(0.000_017_037_2), "1.70372e-05");
        assert_eq!(fmt_g(2.225_540_9), "2.22554");
        assert_eq!(fmt_g(-0.203_932), "-0.203932");
        assert_eq!(fmt_g(1_234_567.0), "1.23457e+06");
        assert_eq!(fmt_g(123_456.0), "123456");
        assert_eq!(fmt_g(0.1), "0.1");
        assert_eq!(fmt_g(9.999_999), "10");
    }

    #[test]
    fn csv_layout() {
        let row = ErrorTableRow {
            x: 1.0,
            y: 0.1,
            eta: 0.8,
            gamma: 0.8,
            exact: 0.761394,
            cdlsmd: 0.778437,
            abs_error: 0.017043,
        };
        assert_eq!(
            error_table_csv(&[row]),
            "x,y,eta,gamma,exact,cdlsmd,abs_error\n1,0.1,0.8,0.8,0.761394,0.778437,0.017043\n"
        );
    }
}
