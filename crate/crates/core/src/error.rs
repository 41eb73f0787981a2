use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("division by zero")]
    DivisionByZero,

    #[error("degree violation: {0}")]
    DegreeViolation(String),

    #[error("the defining polynomial must be nonconstant")]
    ConstantPolynomial,

    #[error("the twisting parameter t must be nonzero")]
    ZeroTwist,

    #[error("elements live in different algebras")]
    AmbientMismatch,

    #[error("polynomial divisibility failure: {0}")]
    NotDivisible(String),

    #[error("insufficient moments: need order {needed}, have {available}")]
    InsufficientMoments { needed: usize, available: usize },

    #[error("the trace is not degenerate")]
    NotDegenerate,

    #[error("{0} is not a root of the defining polynomial")]
    NotARoot(String),

    #[error("root-order precondition failed: {0}")]
    RootOrder(String),

    #[error("argument too close to a pole: {0}")]
    PoleProximity(String),

    #[error("parameters outside the convergence domain: {0}")]
    Domain(String),

    #[error("series did not converge after {terms} terms (tail bound {tail_bound:e})")]
    NotConverged { terms: usize, tail_bound: f64 },

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("invariant falsified: {0}")]
    Falsified(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
