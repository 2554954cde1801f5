use thiserror::Error;

/// Every failure the library can report.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("variable mismatch: {0}")]
    VariableMismatch(String),
    #[error("negative exponent outside the allowed region: {0}")]
    NegativeExponentViolation(String),
    #[error("non-integral coefficient while building universal polynomials: {0}")]
    IntegralityFailure(String),
    #[error("ghost map needs a torsion-free base ring")]
    TorsionRing,
    #[error("mismatched operands: {0}")]
    Mismatch(String),
    #[error("length underflow")]
    LengthUnderflow,
    #[error("element is not in the image of w~: {0}")]
    NotInImage(String),
    #[error("p = 2 is not supported with more than two summands")]
    CharTwoUnsupported,
    #[error("duplicate summand in Teichmuller sum")]
    DuplicateSummand,
    #[error("argument out of range: {0}")]
    RangeError(String),
    #[error("weight support too small for the requested degree")]
    SupportTooSmall,
    #[error("weight is not admissible at the target level: {0}")]
    Inadmissible(String),
    #[error("not a cocycle: {0}")]
    NotACocycle(String),
    #[error("coefficient vanished mod p at {0}")]
    CoefficientVanished(String),
    #[error("case exceeds the supported scale: {0}")]
    ScaleExceeded(String),
    #[error("unknown suite: {0}")]
    UnknownSuite(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
