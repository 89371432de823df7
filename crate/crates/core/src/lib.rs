#![no_std]
#![doc = include_str!("../README.md")]

extern crate alloc;

pub mod error;
pub mod expr;
pub mod numeric;
pub mod poly;
pub mod rational;
pub mod solver;
pub mod transform;

pub use error::{Error, Result};
pub use expr::{adomian, Basis, CanonicalExpr, CanonicalTerm, Factor, NonlinearitySpec, Trig, Var};
pub use poly::{GaussianRational, Poly};
pub use rational::Rational;
pub use solver::{solve, Problem, SeriesSolution, Status};
pub use transform::{
    apply_kernel, derivative_rule, forward, inverse, Direction, LinearOperator, OperatorTerm, TransformExpr,
};
