use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseRationalError {
    #[error("malformed rational {0:?}")]
    Malformed(String),
    #[error("zero denominator in {0:?}")]
    ZeroDenominator(String),
    #[error("rational literal of {0} bytes is too long")]
    TooLong(usize),
}

/// Errors raised by constructors and computations in this crate.
///
/// Mathematical axiom violations are never errors; validators report them.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("point {point} is not covered by any generator")]
    Uncoverable { point: usize },
    #[error("ground size mismatch: expected {expected}, got {actual}")]
    GroundMismatch { expected: usize, actual: usize },
    #[error("size limit exceeded: {what} is {actual}, limit {limit}")]
    SizeLimit {
        what: &'static str,
        actual: usize,
        limit: usize,
    },
    #[error("bad weights: {0}")]
    BadWeights(String),
    #[error("out of range: {0}")]
    Range(String),
    #[error("family does not cover: {0}")]
    NotACover(String),
    #[error("unknown kind {0:?}")]
    UnknownKind(String),
    #[error("parameter out of range: {0}")]
    ParamRange(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("malformed: {0}")]
    Malformed(String),
    #[error(transparent)]
    Rational(#[from] ParseRationalError),
    #[error("schema: {0}")]
    Schema(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn size_limit(what: &'static str, actual: usize, limit: usize) -> Result<()> {
    if actual > limit {
        Err(Error::SizeLimit { what, actual, limit })
    } else {
        Ok(())
    }
}
