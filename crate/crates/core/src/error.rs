use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("twice_value {0} is even; half-integers are stored as odd integers")]
    EvenTwiceValue(i64),
    #[error("spin-flip set has odd cardinality {0}")]
    OddCardinality(usize),
    #[error("spin-flip set is not strictly increasing at position {0}")]
    NotStrictlyIncreasing(usize),
    #[error("empty contour has no volume")]
    EmptyContour,
    #[error("cannot parse spin-flip set: {0}")]
    Parse(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("cannot certify infinite sum exactly")]
    ZeroTolerance,
    #[error("certification failed: {0}")]
    Certification(String),
    #[error("resource limit exceeded: {0}")]
    Resource(String),
}

pub type Result<T> = std::result::Result<T, Error>;
