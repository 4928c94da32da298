use thiserror::Error;

/// Errors raised by the library. Domain verdicts (a matrix that is not a
/// metric, an axiom that fails on a sample) are reported values, never errors;
/// this type is reserved for inputs an operation cannot be applied to.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid input: {0}")]
    Input(String),

    #[error("label mismatch: operands live on different carriers")]
    LabelMismatch,

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("comparing function undefined relative to the zero element")]
    UndefinedRelative,

    #[error("the zero element is not allowed here: {0}")]
    ZeroElement(String),

    #[error("unknown builtin metric {0:?}")]
    UnknownBuiltin(String),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("missing weight for basis index {0:?}")]
    MissingWeight(String),

    #[error("no independence witness: the two parameter sets are identical")]
    NoWitness,

    #[error("parameter equality: both norms share subset and ratio, so they coincide")]
    ParameterEquality,

    #[error("io error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub(crate) fn parse(msg: impl Into<String>) -> Self {
        Error::Parse(msg.into())
    }

    pub(crate) fn params(msg: impl Into<String>) -> Self {
        Error::InvalidParams(msg.into())
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
