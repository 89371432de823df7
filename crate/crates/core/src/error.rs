use alloc::string::String;

/// Errors raised anywhere in the engine.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("evaluation point lies outside the region of convergence")]
    OutsideRoc,
    #[error("evaluation point hits a pole")]
    PoleHit,
    #[error("expected {expected} boundary images, found {found}")]
    ArityMismatch { expected: usize, found: usize },
    #[error("boundary image {index} depends on both transform variables")]
    BoundaryNotSingleVariable { index: usize },
    #[error("kernel application leaves a coupled denominator")]
    NotSeparable,
    #[error("outside the invertible class: {0}")]
    OutOfClass(String),
    #[error("quadrature did not converge within the subdivision limit")]
    NonConvergent,
    #[error("invalid problem: {0}")]
    InvalidProblem(String),
}

pub type Result<T> = core::result::Result<T, Error>;
