use thiserror::Error;

/// Everything that can go wrong while parsing fronts or computing invariants.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at line {line}: {message}")]
    Syntax { line: usize, message: String },

    #[error("invalid front at event {event}: {message}")]
    Validation { event: usize, message: String },

    #[error("empty front diagram")]
    EmptyDiagram,

    #[error("unknown component {0}")]
    UnknownComponent(usize),

    #[error("resolution covers {got} crossings but the front has {expected}")]
    AssignmentMismatch { expected: usize, got: usize },

    #[error("front has {crossings} crossings, above the cap of {cap}")]
    TooManyCrossings { crossings: usize, cap: usize },

    #[error("negative power of a polynomial that is not a monomial")]
    NegativePowerOfNonMonomial,

    #[error("odd A-exponent {0} cannot be written in q = -A^-2")]
    OddExponent(i32),

    #[error("enhanced states come from different fronts")]
    DifferentFront,

    #[error("boundary map does not square to zero")]
    NotAComplex,

    #[error("move site is not applicable to this front")]
    InvalidSite,
}

pub type Result<T> = std::result::Result<T, Error>;
