use thiserror::Error;

/// Every failure the library can signal.
///
/// Variants map onto stable machine-readable codes through [`Error::code`],
/// which the command line front end prints verbatim.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("element is not a unit")]
    NotAUnit,
    #[error("element is a zero divisor")]
    ZeroDivisor,
    #[error("divisor is not monic")]
    NonMonicDivisor,
    #[error("gcd of two zero polynomials is undefined")]
    UndefinedGcd,
    #[error("separability of the zero polynomial is undefined")]
    UndefinedSeparability,
    #[error("elements belong to different algebras")]
    AlgebraMismatch,
    #[error("element is not primitive")]
    NotPrimitive,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("reflection mirror has non-unit length")]
    IsotropicMirror,
    #[error("sampling exhausted after {0} draws")]
    SamplingExhausted(usize),
    #[error("rank one spaces have no sampling path")]
    RankOneUnsupported,
    #[error("lifting requires <v, w> - 1 to be a unit")]
    UnitConditionViolated,
    #[error("division left a nonzero remainder")]
    NonzeroRemainder,
    #[error("input value is not a unit")]
    NonUnitInput,
    #[error("enumeration domain has {0} points, above the guard")]
    DomainTooLarge(u128),
    #[error("modulus is not separable")]
    NotSeparable,
    #[error("invalid modulus: {0}")]
    InvalidModulus(String),
    #[error("gram matrix is not symmetric")]
    NotSymmetric,
    #[error("quadratic form is degenerate")]
    Degenerate,
    #[error("matrix is not an isometry of the form")]
    NotAnIsometry,
    #[error("no reflection decomposition found")]
    DecompositionFailed,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

impl Error {
    pub fn code(&self) -> &'static str {
        match self {
            Error::NotAUnit => "NotAUnit",
            Error::ZeroDivisor => "ZeroDivisor",
            Error::NonMonicDivisor => "NonMonicDivisor",
            Error::UndefinedGcd => "UndefinedGcd",
            Error::UndefinedSeparability => "UndefinedSeparability",
            Error::AlgebraMismatch => "AlgebraMismatch",
            Error::NotPrimitive => "NotPrimitive",
            Error::DimensionMismatch { .. } => "DimensionMismatch",
            Error::IsotropicMirror => "IsotropicMirror",
            Error::SamplingExhausted(_) => "SamplingExhausted",
            Error::RankOneUnsupported => "RankOneUnsupported",
            Error::UnitConditionViolated => "UnitConditionViolated",
            Error::NonzeroRemainder => "NonzeroRemainder",
            Error::NonUnitInput => "NonUnitInput",
            Error::DomainTooLarge(_) => "DomainTooLarge",
            Error::NotSeparable => "NotSeparable",
            Error::InvalidModulus(_) => "InvalidModulus",
            Error::NotSymmetric => "NotSymmetric",
            Error::Degenerate => "Degenerate",
            Error::NotAnIsometry => "NotAnIsometry",
            Error::DecompositionFailed => "DecompositionFailed",
            Error::Parse(_) => "ParseError",
            Error::Internal(_) => "InternalInvariant",
        }
    }

    /// Process exit status used by the command line tool.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse(_) | Error::NotSymmetric => 2,
            Error::Internal(_) | Error::NonzeroRemainder => 4,
            _ => 3,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
