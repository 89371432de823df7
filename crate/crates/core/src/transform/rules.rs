use crate::error::{Error, Result};
use crate::expr::CanonicalExpr;
use crate::rational::Rational;

use super::{forward, RationalFn, TVar, TransformExpr};

/// Direction of a conformable derivative.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    /// `∂/∂ξ`, transformed by Laplace.
    X,
    /// `∂/∂τ`, transformed by Sumudu.
    Y,
}

/// Image of the `order`-th derivative of `ψ` from `Ψ` and the boundary data.
///
/// * `X`: `v^m Ψ − Σ_k v^{m−1−k} H_k(ω)` with `H_k` the Sumudu image of
///   `∂ξ^k ψ(0, τ)`;
/// * `Y`: `ω^{−n} Ψ − Σ_j ω^{−n+j} F_j(v)` with `F_j` the Laplace image of
///   `∂τ^j ψ(ξ, 0)`.
pub fn derivative_rule(
    psi_image: &TransformExpr,
    direction: Direction,
    order: u32,
    boundary_images: &[TransformExpr],
) -> Result<TransformExpr> {
    if order == 0 {
        return Err(Error::Domain("derivative order must be positive".into()));
    }
    if boundary_images.len() != order as usize {
        return Err(Error::ArityMismatch { expected: order as usize, found: boundary_images.len() });
    }
    for (index, b) in boundary_images.iter().enumerate() {
        let single = b.terms().iter().all(|t| match direction {
            Direction::X => t.rv.is_constant(),
            Direction::Y => t.qw.is_constant(),
        });
        if !single {
            return Err(Error::BoundaryNotSingleVariable { index });
        }
    }
    let m = order as i32;
    let mut out = match direction {
        Direction::X => psi_image.mul_v(&RationalFn::power(TVar::V, m)),
        Direction::Y => psi_image.mul_w(&RationalFn::power(TVar::W, -m)),
    };
    for (k, b) in boundary_images.iter().enumerate() {
        let k = k as i32;
        let shifted = match direction {
            Direction::X => b.mul_v(&RationalFn::power(TVar::V, m - 1 - k)),
            Direction::Y => b.mul_w(&RationalFn::power(TVar::W, -m + k)),
        };
        out = out.sub(&shifted);
    }
    Ok(out)
}

/// Both sides of the first shifting property
/// `T[e^{cξ + dτ} f](v, ω) = (1/(1 − dω)) · T[f](v − c, ω/(1 − dω))`.
pub fn shift_check(f: &CanonicalExpr, c: &Rational, d: &Rational, v: f64, w: f64) -> Result<(f64, f64)> {
    let denom = 1.0 - d.to_f64() * w;
    if denom == 0.0 {
        return Err(Error::PoleHit);
    }
    let shifted = CanonicalExpr::exp(c.clone(), d.clone()).mul(f);
    let lhs = forward(&shifted).eval(v, w)?;
    let rhs = forward(f).eval(v - c.to_f64(), w / denom)? / denom;
    Ok((lhs, rhs))
}
