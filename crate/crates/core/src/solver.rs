//! Transform-domain decomposition solver.
//!
//! The equation `L ψ + N[ψ] = g₁ + g₂` is transformed, the boundary data of
//! every linear term is moved to the right-hand side and the kernel `1/σ(v, ω)`
//! of the linear symbol is applied. The series `ψ = Σ ψ_s` is built from
//!
//! ```text
//! ψ₀      =  T⁻¹[ K · (boundary terms + T[g₁]) ]
//! ψ₁      =  T⁻¹[ K · T[g₂ − A₀] ]
//! ψ_{s+1} = −T⁻¹[ K · T[A_s] ]            s ≥ 1
//! ```
//!
//! with `A_s` the Adomian polynomials of `N`.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::expr::{CanonicalExpr, NonlinearitySpec, Var};
use crate::rational::Rational;
use crate::transform::{
    apply_kernel, forward, inverse, single_variable_image, LinearOperator, RationalFn, TVar, TransformExpr,
};

/// Default cap on the number of series components.
pub const DEFAULT_MAX_TERMS: usize = 8;

/// `L ψ + N[ψ] = g₁ + g₂` with `∂τ^j ψ(ξ, 0) = ics[j]` and `∂ξ^k ψ(0, τ) = bcs[k]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Problem {
    pub name: String,
    pub linear_op: LinearOperator,
    pub nonlin: Option<NonlinearitySpec>,
    pub g1: CanonicalExpr,
    pub g2: CanonicalExpr,
    pub ics: Vec<CanonicalExpr>,
    pub bcs: Vec<CanonicalExpr>,
    pub eta: Rational,
    pub gamma: Rational,
}

impl Problem {
    /// Checks condition counts against the operator orders, that each
    /// condition depends on its own variable only, and that the orders lie in (0, 1].
    pub fn validate(&self) -> Result<()> {
        let n = self.linear_op.max_dy() as usize;
        let m = self.linear_op.max_dx() as usize;
        if self.ics.len() != n {
            return Err(Error::InvalidProblem(format!(
                "operator has τ-order {n} but {} initial conditions were given",
                self.ics.len()
            )));
        }
        if self.bcs.len() != m {
            return Err(Error::InvalidProblem(format!(
                "operator has ξ-order {m} but {} boundary conditions were given",
                self.bcs.len()
            )));
        }
        if let Some(j) = self.ics.iter().position(|f| !f.is_free_of(Var::Tau)) {
            return Err(Error::InvalidProblem(format!("initial condition {j} depends on τ")));
        }
        if let Some(k) = self.bcs.iter().position(|h| !h.is_free_of(Var::Xi)) {
            return Err(Error::InvalidProblem(format!("boundary condition {k} depends on ξ")));
        }
        for (label, order) in [("eta", &self.eta), ("gamma", &self.gamma)] {
            if !order.is_positive() || *order > Rational::one() {
                return Err(Error::InvalidProblem(format!("{label} = {order} is outside (0, 1]")));
            }
        }
        Ok(())
    }

    /// `g₁ + g₂`.
    pub fn forcing(&self) -> CanonicalExpr {
        self.g1.add(&self.g2)
    }

    fn adomian(&self, components: &[CanonicalExpr], i: usize) -> Result<CanonicalExpr> {
        match &self.nonlin {
            Some(n) => n.adomian(components, i),
            None => Ok(CanonicalExpr::zero()),
        }
    }
}

/// Outcome of the series iteration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Status {
    /// Component `k` and every later one vanish.
    Converged(usize),
    /// The component cap was reached first.
    Truncated(usize),
    Failed(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeriesSolution {
    pub components: Vec<CanonicalExpr>,
    pub status: Status,
    pub assembled: CanonicalExpr,
}

/// Transform-domain boundary contribution of the linear operator:
/// `Σ c (Σ_k v^{p−1−k} H_k)` over ξ-terms plus `Σ c (Σ_j ω^{−q+j} F_j)` over τ-terms.
fn boundary_image(p: &Problem) -> Result<TransformExpr> {
    let f: Vec<TransformExpr> = p.ics.iter().map(|f| single_variable_image(f, Var::Xi)).collect::<Result<_>>()?;
    let h: Vec<TransformExpr> = p.bcs.iter().map(|h| single_variable_image(h, Var::Tau)).collect::<Result<_>>()?;
    let mut out = TransformExpr::zero();
    for t in p.linear_op.terms() {
        let (dx, dy) = (t.dx_order as i32, t.dy_order as i32);
        for k in 0..dx {
            let img = h[k as usize].mul_v(&RationalFn::power(TVar::V, dx - 1 - k));
            out = out.add(&img.scale(&t.coeff));
        }
        for j in 0..dy {
            let img = f[j as usize].mul_w(&RationalFn::power(TVar::W, -dy + j));
            out = out.add(&img.scale(&t.coeff));
        }
    }
    Ok(out)
}

/// `T⁻¹[K · T[e]]`, short-circuiting on an exactly zero operand.
fn kernel_solve(p: &Problem, e: &CanonicalExpr) -> Result<CanonicalExpr> {
    if e.is_zero() {
        return Ok(CanonicalExpr::zero());
    }
    inverse(&apply_kernel(&p.linear_op, &forward(e))?)
}

/// `ψ₀`: boundary data and `g₁` through the kernel.
pub fn build_psi0(p: &Problem) -> Result<CanonicalExpr> {
    p.validate()?;
    let rhs = boundary_image(p)?.add(&forward(&p.g1));
    if rhs.is_zero() {
        return Ok(CanonicalExpr::zero());
    }
    inverse(&apply_kernel(&p.linear_op, &rhs)?)
}

/// `ψ₁ = T⁻¹[K · T[g₂ − A₀]]`.
pub fn build_psi1(p: &Problem, psi0: &CanonicalExpr) -> Result<CanonicalExpr> {
    let a0 = p.adomian(core::slice::from_ref(psi0), 0)?;
    kernel_solve(p, &p.g2.sub(&a0))
}

/// `ψ_{s+1} = −T⁻¹[K · T[A_s]]` for `s ≥ 1`.
pub fn build_next(p: &Problem, components: &[CanonicalExpr], s: usize) -> Result<CanonicalExpr> {
    if s == 0 {
        return Err(Error::Domain("build_next starts at s = 1".into()));
    }
    let a = p.adomian(components, s)?;
    Ok(kernel_solve(p, &a)?.scale(&Rational::from_int(-1)))
}

/// Whether the zero run `components[k..]` forces every later component to vanish.
///
/// For a bilinear `N`, once `ψ_k = … = ψ_s = 0` the polynomial `A_s` only keeps
/// products of components with index below `k`, so it vanishes for
/// `s ≥ 2k − 1`. The run must also include one verified step past `k`.
fn tail_is_zero(components: &[CanonicalExpr], k: usize) -> bool {
    let last = components.len() - 1;
    last > k && last + 1 >= 2 * k
}

fn first_zero_of_run(components: &[CanonicalExpr]) -> Option<usize> {
    let mut k = components.len();
    while k > 0 && components[k - 1].is_zero() {
        k -= 1;
    }
    (k < components.len()).then_some(k)
}

/// Runs the decomposition until the tail provably vanishes or `max_terms`
/// components have been built.
pub fn solve(p: &Problem, max_terms: usize) -> SeriesSolution {
    let mut components: Vec<CanonicalExpr> = Vec::new();
    let finish = |components: Vec<CanonicalExpr>, status: Status| {
        let assembled = components.iter().fold(CanonicalExpr::zero(), |acc, c| acc.add(c));
        SeriesSolution { components, status, assembled }
    };
    let max_terms = max_terms.max(1);
    while components.len() < max_terms {
        let s = components.len();
        let next = match s {
            0 => build_psi0(p),
            1 => build_psi1(p, &components[0]),
            _ => build_next(p, &components, s - 1),
        };
        match next {
            Ok(c) => components.push(c),
            Err(e) => return finish(components, Status::Failed(format!("psi{s}: {e}"))),
        }
        if let Some(k) = first_zero_of_run(&components) {
            if tail_is_zero(&components, k) {
                return finish(components, Status::Converged(k));
            }
        }
    }
    finish(components, Status::Truncated(max_terms))
}

/// `L ψ + N[ψ] − (g₁ + g₂)`; the zero expression certifies a solution of the PDE.
pub fn residual(p: &Problem, candidate: &CanonicalExpr) -> CanonicalExpr {
    let mut lhs = CanonicalExpr::zero();
    for t in p.linear_op.terms() {
        let d = candidate.d_dxi(t.dx_order).d_dtau(t.dy_order);
        lhs = lhs.add(&d.scale(&t.coeff));
    }
    if let Some(n) = &p.nonlin {
        lhs = lhs.add(&n.apply(candidate));
    }
    lhs.sub(&p.forcing())
}

/// `∂τ^j ψ(ξ, 0) − f_j` for every initial condition.
pub fn initial_mismatch(p: &Problem, candidate: &CanonicalExpr) -> Vec<CanonicalExpr> {
    p.ics.iter().enumerate().map(|(j, f)| candidate.d_dtau(j as u32).at_zero(Var::Tau).sub(f)).collect()
}

/// `∂ξ^k ψ(0, τ) − h_k` for every boundary condition.
pub fn boundary_mismatch(p: &Problem, candidate: &CanonicalExpr) -> Vec<CanonicalExpr> {
    p.bcs.iter().enumerate().map(|(k, h)| candidate.d_dxi(k as u32).at_zero(Var::Xi).sub(h)).collect()
}

/// The solution satisfies the PDE and every side condition exactly.
pub fn certify(p: &Problem, candidate: &CanonicalExpr) -> bool {
    residual(p, candidate).is_zero()
        && initial_mismatch(p, candidate).iter().all(CanonicalExpr::is_zero)
        && boundary_mismatch(p, candidate).iter().all(CanonicalExpr::is_zero)
}
