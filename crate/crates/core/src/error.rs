use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("unsplittable product matching: word lengths {left} and {right} differ")]
    UnsplittableProduct { left: usize, right: usize },

    #[error("componentwise splitting requires unflagged terms")]
    FlaggedTerm,

    #[error("a word must contain at least one term")]
    EmptyWord,

    #[error("invalid edge symbol {0:?}")]
    InvalidSymbol(String),

    #[error("pattern {0} is outside 0..=15")]
    InvalidPattern(u32),

    #[error("pair ({0},{1}) is excluded from two-rule classification")]
    ExcludedPair(u8, u8),

    #[error("missing beta substitution rule: a beta tile must expand")]
    MissingBetaRule,

    #[error("invalid spread geometry: {0}")]
    InvalidSpreadGeometry(String),

    #[error("invalid curve: {0}")]
    InvalidCurve(String),

    #[error("no perturbation given for class {0}")]
    MissingClass(usize),

    #[error("class {0} is self-dual but its curve is not antisymmetric")]
    SelfDualViolation(usize),

    #[error("amplitude too large: outline self-intersects on class {0}")]
    AmplitudeTooLarge(usize),

    #[error("internal error: shared edge curves disagree at segment {0:?}")]
    Inconsistent(((i64, i64), (i64, i64))),

    #[error("relation closure did not stabilise after {0} iterations")]
    NoFixedPoint(u32),

    #[error("malformed input: {0}")]
    Parse(String),
}
