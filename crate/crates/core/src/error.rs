use alloc::string::String;
use alloc::vec::Vec;

/// Errors raised by the cost engine.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("levelization denominator is zero (no positive VMT or dispensed quantity)")]
    DegenerateDivision,

    #[error("dataset incomplete: {0}")]
    DatasetIncomplete(String),

    #[error("dataset invalid at `{field}`: {reason}")]
    DatasetInvalid { field: String, reason: String },

    #[error("infeasible vehicles (required service exceeds window): {}", .0.join(", "))]
    Infeasible(Vec<String>),

    #[error("instance has {size} vehicles, exhaustive search is limited to {limit}")]
    TooLarge { size: usize, limit: usize },

    #[error("unknown factor `{0}`")]
    UnknownFactor(String),

    #[error("unknown variant `{0}`")]
    UnknownVariant(String),
}

pub type Result<T> = core::result::Result<T, Error>;

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub(crate) fn incomplete(msg: impl Into<String>) -> Self {
        Error::DatasetIncomplete(msg.into())
    }

    pub(crate) fn field(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::DatasetInvalid {
            field: field.into(),
            reason: reason.into(),
        }
    }
}
