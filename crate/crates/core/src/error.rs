use thiserror::Error;

/// Errors raised by the exact-arithmetic and expansion engines.
///
/// Inadmissible parameter choices in the inverse problem are *not* errors;
/// they come back as structured outcomes (see [`crate::prescribe::Outcome`]).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("inexact division: {0}")]
    InexactDivision(String),

    #[error("no polynomial square-root part: {0}")]
    NoSquareRootPart(String),

    #[error("invalid quadratic: {0}")]
    InvalidQuadratic(String),

    #[error("complete quotient has Q = 0")]
    ZeroDenominator,

    #[error("expansion did not close within {0} steps")]
    StepLimit(usize),

    #[error("expansion shape violated: {0}")]
    ShapeViolation(String),

    #[error("index {index} out of range (valid 0..={max})")]
    IndexOutOfRange { index: usize, max: usize },

    #[error("not a unit: x^2 - t*x*y + n*y^2 = {0}")]
    NotAUnit(String),

    #[error("no decomposition in positive integers: {0}")]
    NoPositiveDecomposition(String),

    #[error("degenerate word: {0}")]
    DegenerateWord(String),

    #[error("periodic word does not give a quadratic integer: {0}")]
    NonIntegralQuadratic(String),

    #[error("word is not a palindrome")]
    NotPalindrome,

    #[error("word entries must be positive: {0}")]
    NonPositiveEntry(String),

    #[error("expansion is not periodic")]
    NotPeriodic,

    #[error("inadmissible parameter: {0}")]
    InadmissibleParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;
