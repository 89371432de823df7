use crate::error::{Error, Result};
use crate::rational::Rational;

use super::{CanonicalExpr, Var};

/// A bilinear nonlinearity
///
/// ```text
/// N[ψ] = coeff · D_ξ^{outer_dx} D_τ^{outer_dy} ( (D_ξ^{left_dx} D_τ^{left_dy} ψ) · (D_ξ^{right_dx} D_τ^{right_dy} ψ) )
/// ```
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct NonlinearitySpec {
    pub coeff: Rational,
    pub outer_dx: u32,
    pub outer_dy: u32,
    pub left_dx: u32,
    pub left_dy: u32,
    pub right_dx: u32,
    pub right_dy: u32,
}

impl Default for NonlinearitySpec {
    /// `ψ²`.
    fn default() -> Self {
        Self { coeff: Rational::one(), outer_dx: 0, outer_dy: 0, left_dx: 0, left_dy: 0, right_dx: 0, right_dy: 0 }
    }
}

impl NonlinearitySpec {
    /// `ψ · ∂ξ ψ`.
    pub fn advective() -> Self {
        Self { right_dx: 1, ..Self::default() }
    }

    pub fn with_coeff(self, coeff: Rational) -> Self {
        Self { coeff, ..self }
    }

    pub fn left(&self, e: &CanonicalExpr) -> CanonicalExpr {
        e.derivative(Var::Xi, self.left_dx).derivative(Var::Tau, self.left_dy)
    }

    pub fn right(&self, e: &CanonicalExpr) -> CanonicalExpr {
        e.derivative(Var::Xi, self.right_dx).derivative(Var::Tau, self.right_dy)
    }

    /// Applies the outer derivatives and the coefficient to an already formed product.
    pub fn outer(&self, product: &CanonicalExpr) -> CanonicalExpr {
        product.derivative(Var::Xi, self.outer_dx).derivative(Var::Tau, self.outer_dy).scale(&self.coeff)
    }

    /// `N[ψ]` for a single expression.
    pub fn apply(&self, psi: &CanonicalExpr) -> CanonicalExpr {
        self.outer(&self.left(psi).mul(&self.right(psi)))
    }

    /// The Adomian polynomial `A_i` of the component sequence.
    ///
    /// For a bilinear nonlinearity this is the Cauchy convolution
    /// `Outer(Σ_{j=0}^{i} L ψ_j · R ψ_{i-j})`.
    pub fn adomian(&self, components: &[CanonicalExpr], i: usize) -> Result<CanonicalExpr> {
        if components.len() < i + 1 {
            return Err(Error::ArityMismatch { expected: i + 1, found: components.len() });
        }
        let mut sum = CanonicalExpr::zero();
        for j in 0..=i {
            let (a, b) = (&components[j], &components[i - j]);
            if a.is_zero() || b.is_zero() {
                continue;
            }
            sum = sum.add(&self.left(a).mul(&self.right(b)));
        }
        Ok(self.outer(&sum))
    }
}

/// Free-function form of [`NonlinearitySpec::adomian`].
pub fn adomian(nonlin: &NonlinearitySpec, components: &[CanonicalExpr], i: usize) -> Result<CanonicalExpr> {
    nonlin.adomian(components, i)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::Var;

    fn r(n: i64) -> Rational {
        Rational::from_int(n)
    }

    #[test]
    fn dissipative_wave_a0() {
        // N = ∂τ(ψ ∂ξψ), ψ0 = e^{-τ} sin ξ
        let spec = NonlinearitySpec { outer_dy: 1, ..NonlinearitySpec::advective() };
        let psi0 = CanonicalExpr::exp(r(0), r(-1)).mul(&CanonicalExpr::sin(Var::Xi, r(1)));
        let a0 = spec.adomian(&[psi0], 0).unwrap();
        let expected = CanonicalExpr::exp(r(0), r(-2)).mul(&CanonicalExpr::sin(Var::Xi, r(2))).scale(&r(-1));
        assert_eq!(a0, expected);
    }

    #[test]
    fn klein_gordon_a0() {
        let psi0 = CanonicalExpr::monomial(1, 2, 2, r(0), r(0));
        let a0 = NonlinearitySpec::default().adomian(&[psi0], 0).unwrap();
        assert_eq!(a0, CanonicalExpr::monomial(1, 4, 4, r(0), r(0)));
    }

    #[test]
    fn zero_component_kills_a1() {
        let psi0 = CanonicalExpr::sin(Var::Xi, r(1)).add(&CanonicalExpr::tau());
        for spec in [NonlinearitySpec::default(), NonlinearitySpec::advective()] {
            let a1 = spec.adomian(&[psi0.clone(), CanonicalExpr::zero()], 1).unwrap();
            assert!(a1.is_zero());
        }
    }

    #[test]
    fn short_component_list_is_rejected() {
        let err = NonlinearitySpec::default().adomian(&[CanonicalExpr::zero()], 2);
        assert_eq!(err, Err(Error::ArityMismatch { expected: 3, found: 1 }));
    }
}
