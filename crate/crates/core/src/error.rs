use thiserror::Error;

/// Errors raised by the field backends, the form engine and the graded rings.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid field: {0}")]
    InvalidField(String),

    #[error("elements belong to different fields ({0} vs {1})")]
    FieldMismatch(String, String),

    #[error("division by zero")]
    DivisionByZero,

    #[error("zero is not a unit")]
    ZeroUnit,

    #[error("parse error at offset {offset}: {message}")]
    Parse { offset: usize, message: String },

    #[error("{operation} is not supported over {backend}")]
    CapabilityUnsupported { backend: String, operation: String },

    #[error("class does not lie in I^{degree}")]
    NotInFundamentalPower { degree: i32 },

    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(i32, i32),

    #[error("invalid prime descriptor: {0}")]
    InvalidDescriptor(String),

    #[error("expression is not homogeneous")]
    NonHomogeneous,

    #[error("pullback components disagree in degree {0}")]
    PullbackMismatch(i32),

    #[error("integer {0} is too large to factor")]
    TooLarge(String),
}

impl Error {
    pub(crate) fn parse(offset: usize, message: impl Into<String>) -> Self {
        Error::Parse { offset, message: message.into() }
    }

    pub(crate) fn unsupported(backend: impl ToString, operation: impl Into<String>) -> Self {
        Error::CapabilityUnsupported { backend: backend.to_string(), operation: operation.into() }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
