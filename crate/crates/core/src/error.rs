use std::fmt;

use thiserror::Error;

/// Source position of a parse diagnostic (1-based line and column).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Position {
    pub line: usize,
    pub column: usize,
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands live over different base fields or variable sets")]
    CharacteristicMismatch,
    #[error("valuation of zero is undefined")]
    ZeroArgument,
    #[error("inconsistent derivation: {0}")]
    InconsistentDerivation(String),
    #[error("not an automorphism: {0}")]
    NotAnAutomorphism(String),
    #[error("operands belong to different skew contexts")]
    ContextMismatch,
    #[error("division by the zero skew polynomial")]
    DivisionByZeroPoly,
    #[error("operation requires positive characteristic")]
    WrongCharacteristic,
    #[error("operation requires a pure automorphism (delta = 0)")]
    RequiresPureAutomorphism,
    #[error("operation requires a pure derivation (sigma = 1)")]
    RequiresPureDerivation,
    #[error("sigma(u) - u does not equal the given alpha")]
    NotAdditiveEigen,
    #[error("resource bound exceeded: {0}")]
    ResourceBoundExceeded(String),
    #[error("parse error at {pos}: {msg}")]
    Parse { pos: Position, msg: String },
    #[error("undeclared variable `{name}` at {pos}")]
    UndeclaredVariable { name: String, pos: Position },
    #[error("{0} is not a prime")]
    BadCharacteristic(u64),
    #[error("field presentation: {0}")]
    BadPresentation(String),
    #[error("operation requires a univariate function field")]
    NotUnivariate,
    #[error("place polynomial rejected: {0}")]
    BadPlace(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("internal invariant violated: {0}")]
    InvariantViolation(String),
}

impl Error {
    /// Stable machine-readable tag used in JSON error reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::DivisionByZero => "DivisionByZero",
            Error::CharacteristicMismatch => "CharacteristicMismatch",
            Error::ZeroArgument => "ZeroArgument",
            Error::InconsistentDerivation(_) => "InconsistentDerivation",
            Error::NotAnAutomorphism(_) => "NotAnAutomorphism",
            Error::ContextMismatch => "ContextMismatch",
            Error::DivisionByZeroPoly => "DivisionByZeroPoly",
            Error::WrongCharacteristic => "WrongCharacteristic",
            Error::RequiresPureAutomorphism => "RequiresPureAutomorphism",
            Error::RequiresPureDerivation => "RequiresPureDerivation",
            Error::NotAdditiveEigen => "NotAdditiveEigen",
            Error::ResourceBoundExceeded(_) => "ResourceBoundExceeded",
            Error::Parse { .. } => "ParseError",
            Error::UndeclaredVariable { .. } => "UndeclaredVariable",
            Error::BadCharacteristic(_) => "BadCharacteristic",
            Error::BadPresentation(_) => "BadPresentation",
            Error::NotUnivariate => "NotUnivariate",
            Error::BadPlace(_) => "BadPlace",
            Error::InvalidArgument(_) => "InvalidArgument",
            Error::InvariantViolation(_) => "InvariantViolation",
        }
    }

    pub fn position(&self) -> Option<Position> {
        match self {
            Error::Parse { pos, .. } | Error::UndeclaredVariable { pos, .. } => Some(*pos),
            _ => None,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
