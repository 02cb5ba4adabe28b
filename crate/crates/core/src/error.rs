use thiserror::Error;

use crate::arith::Rational;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("weight vector entry {index} is not strictly positive ({value})")]
    NonPositiveWeight { index: usize, value: Rational },

    #[error("weight vector is empty")]
    EmptyWeight,

    #[error("division by zero")]
    DivisionByZero,

    #[error("dimension {n} exceeds the supported maximum of {max}")]
    DimensionTooLarge { n: usize, max: usize },

    #[error("argument {value} lies outside [0, {upper}]")]
    OutOfRange { value: Box<Rational>, upper: Box<Rational> },

    #[error("empty intersection: trace values {0} and {1} differ")]
    EmptyIntersection(Box<Rational>, Box<Rational>),

    #[error("y has negative entries; no classical maximum exists in general")]
    NegativeEntries,

    #[error("curves live on different domains [0, {0}] and [0, {1}]")]
    DomainMismatch(Box<Rational>, Box<Rational>),

    #[error("malformed linear program: {0}")]
    MalformedProgram(String),

    #[error("linear program is infeasible")]
    Infeasible,

    #[error("linear program is unbounded")]
    Unbounded,

    #[error("empty input: {0}")]
    EmptyInput(&'static str),

    #[error("matrix is not {0}")]
    NotStochastic(&'static str),

    #[error("expected dimension {expected}, found {found}")]
    WrongDimension { expected: usize, found: usize },

    #[error(
        "weight vector must satisfy d1 > d2 > d3 > 0; the catalog for coinciding entries \
         is not provided"
    )]
    DegenerateWeights,

    #[error("vertex enumeration mismatch: {0}")]
    VerificationFailed(String),
}
