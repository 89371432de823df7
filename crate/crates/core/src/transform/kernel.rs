use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::rational::Rational;

use super::{BiPoly, RationalFn, TVar, TransformExpr, TransformTerm};

/// `coeff · ∂ξ^{dx_order}` or `coeff · ∂τ^{dy_order}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OperatorTerm {
    pub coeff: Rational,
    pub dx_order: u32,
    pub dy_order: u32,
}

/// Linear part `Σ c_l D_ξ^{p_l}` + `Σ c_l D_τ^{q_l}` of the PDE; each term acts
/// in one variable only.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LinearOperator {
    terms: Vec<OperatorTerm>,
}

impl LinearOperator {
    pub fn new(terms: Vec<OperatorTerm>) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::InvalidProblem("linear operator has no terms".into()));
        }
        if let Some(t) = terms.iter().find(|t| t.dx_order > 0 && t.dy_order > 0) {
            return Err(Error::InvalidProblem(format!(
                "mixed derivative D_xi^{} D_tau^{} is not supported",
                t.dx_order, t.dy_order
            )));
        }
        // merge like terms
        let mut merged: BTreeMap<(u32, u32), Rational> = BTreeMap::new();
        for t in terms {
            *merged.entry((t.dx_order, t.dy_order)).or_insert_with(Rational::zero) += &t.coeff;
        }
        let terms: Vec<OperatorTerm> = merged
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|((dx_order, dy_order), coeff)| OperatorTerm { coeff, dx_order, dy_order })
            .collect();
        if terms.is_empty() {
            return Err(Error::InvalidProblem("linear operator cancels to zero".into()));
        }
        Ok(Self { terms })
    }

    pub fn terms(&self) -> &[OperatorTerm] {
        &self.terms
    }

    /// Highest ξ-derivative order: the number of boundary conditions.
    pub fn max_dx(&self) -> u32 {
        self.terms.iter().map(|t| t.dx_order).max().unwrap_or(0)
    }

    /// Highest τ-derivative order: the number of initial conditions.
    pub fn max_dy(&self) -> u32 {
        self.terms.iter().map(|t| t.dy_order).max().unwrap_or(0)
    }

    /// `ω^n · Σ c_l v^{p_l} ω^{-q_l}` with `n` the highest τ-order: a polynomial.
    pub fn cleared_symbol(&self) -> BiPoly {
        let n = self.max_dy() as usize;
        let mut d = BiPoly::zero();
        for t in &self.terms {
            d.add_term(t.dx_order as usize, n - t.dy_order as usize, t.coeff.clone());
        }
        d
    }

    /// Value of the symbol `Σ c_l v^{p_l} ω^{-q_l}`.
    pub fn symbol_at(&self, v: f64, w: f64) -> f64 {
        self.terms
            .iter()
            .map(|t| t.coeff.to_f64() * libm::pow(v, t.dx_order as f64) * libm::pow(w, -(t.dy_order as f64)))
            .sum()
    }
}

/// Multiplies `t` by the kernel `(Σ c_l v^{p_l} ω^{-q_l})^{-1}`.
///
/// The operand is put over one denominator `N/(P(v)Q(ω))`; the kernel
/// contributes `ω^n / D(v, ω)`. Pure-`v` and pure-`ω` factors of `D` join
/// `P` and `Q`; whatever remains must divide `ω^n N` exactly or the result
/// would not be separable.
pub fn apply_kernel(op: &LinearOperator, t: &TransformExpr) -> Result<TransformExpr> {
    if t.is_empty() {
        return Ok(TransformExpr { terms: Vec::new(), roc: t.roc.clone() });
    }
    let (n, p, q) = t.combined();
    if n.is_zero() {
        return Ok(TransformExpr { terms: Vec::new(), roc: t.roc.clone() });
    }
    let numer = n.shift_w(op.max_dy() as usize);
    let d = op.cleared_symbol();
    let pv = d.content_v();
    let pw = d.content_w();
    let core = d.exact_div(&BiPoly::from_product(&pv, &pw)).expect("contents divide the symbol");
    let quotient = if core.is_constant() {
        numer.scale(&core.constant_term().recip())
    } else {
        numer.exact_div(&core).ok_or(Error::NotSeparable)?
    };
    let den_v = p.mul(&pv);
    let den_w = q.mul(&pw);
    // group by power of v: v^i · (Σ_j c_ij ω^j)
    let mut rows: BTreeMap<usize, BTreeMap<usize, Rational>> = BTreeMap::new();
    for (&(i, j), c) in quotient.terms() {
        rows.entry(i).or_default().insert(j, c.clone());
    }
    let mut out = TransformExpr { terms: Vec::new(), roc: t.roc.clone() };
    for (i, row) in rows {
        let max_j = row.keys().copied().max().unwrap_or(0);
        let wpoly = Poly::new((0..=max_j).map(|j| row.get(&j).cloned().unwrap_or_else(Rational::zero)).collect());
        let rv = RationalFn::new(TVar::V, Poly::monomial(Rational::one(), i), den_v.clone());
        let qw = RationalFn::new(TVar::W, wpoly, den_w.clone());
        out.push(TransformTerm::new(Rational::one(), rv, qw));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::transform::Roc;
    use alloc::vec;

    fn op(terms: &[(i64, u32, u32)]) -> LinearOperator {
        LinearOperator::new(
            terms
                .iter()
                .map(|&(c, dx_order, dy_order)| OperatorTerm { coeff: Rational::from_int(c), dx_order, dy_order })
                .collect(),
        )
        .unwrap()
    }

    fn term(c: i64, rv: RationalFn, qw: RationalFn) -> TransformTerm {
        TransformTerm::new(Rational::from_int(c), rv, qw)
    }

    #[test]
    fn rejects_mixed_and_empty_operators() {
        assert!(LinearOperator::new(vec![]).is_err());
        assert!(LinearOperator::new(vec![OperatorTerm { coeff: Rational::one(), dx_order: 1, dy_order: 1 }]).is_err());
        assert!(LinearOperator::new(vec![
            OperatorTerm { coeff: Rational::one(), dx_order: 2, dy_order: 0 },
            OperatorTerm { coeff: Rational::from_int(-1), dx_order: 2, dy_order: 0 },
        ])
        .is_err());
    }

    #[test]
    fn zero_operand_passes_through() {
        let k = op(&[(1, 2, 0), (-1, 0, 2), (-2, 0, 1)]);
        let out = apply_kernel(&k, &TransformExpr::zero()).unwrap();
        assert!(out.is_empty());
    }

    #[test]
    fn wave_kernel_cancels() {
        // symbol ω^{-2} - v^2; operand (1 - v²ω²)/(v ω²) = 1/(v ω²) - v
        let k = op(&[(1, 0, 2), (-1, 2, 0)]);
        let t = TransformExpr::from_terms(
            [
                term(1, RationalFn::power(TVar::V, -1), RationalFn::power(TVar::W, -2)),
                term(-1, RationalFn::power(TVar::V, 1), RationalFn::one(TVar::W)),
            ],
            Roc::default(),
        );
        let out = apply_kernel(&k, &t).unwrap();
        let expected = TransformExpr::from_terms(
            [term(1, RationalFn::power(TVar::V, -1), RationalFn::one(TVar::W))],
            Roc::default(),
        );
        assert!(out.equivalent(&expected));
        for &(v, w) in &[(0.7, 0.3), (1.5, 0.2), (2.0, 0.9), (3.1, 0.05), (0.4, 0.6)] {
            let direct = t.eval(v, w).unwrap() / k.symbol_at(v, w);
            assert!((out.eval(v, w).unwrap() - direct).abs() < 1e-10);
        }
    }

    #[test]
    fn telegraph_kernel_without_cancelling_factor_is_not_separable() {
        let k = op(&[(1, 2, 0), (-1, 0, 2), (-2, 0, 1)]);
        let t = TransformExpr::from_terms(
            [term(1, RationalFn::power(TVar::V, -1), RationalFn::one(TVar::W))],
            Roc::default(),
        );
        assert_eq!(apply_kernel(&k, &t).unwrap_err(), Error::NotSeparable);
    }

    #[test]
    fn pure_kernels_always_separate() {
        // ω^{-1} + 0: kernel ω
        let k = op(&[(1, 0, 1)]);
        let t = TransformExpr::from_terms(
            [term(2, RationalFn::power(TVar::V, -1), RationalFn::power(TVar::W, 1))],
            Roc::default(),
        );
        let out = apply_kernel(&k, &t).unwrap();
        let expected = TransformExpr::from_terms(
            [term(2, RationalFn::power(TVar::V, -1), RationalFn::power(TVar::W, 2))],
            Roc::default(),
        );
        assert!(out.equivalent(&expected));
        // 3 v^2: kernel 1/(3 v^2)
        let k = op(&[(3, 2, 0)]);
        let out = apply_kernel(&k, &t).unwrap();
        let expected = TransformExpr::from_terms(
            [TransformTerm::new(Rational::new(2, 3), RationalFn::power(TVar::V, -3), RationalFn::power(TVar::W, 1))],
            Roc::default(),
        );
        assert!(out.equivalent(&expected));
    }
}
