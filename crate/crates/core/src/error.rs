use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Input violates an operation's precondition.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A documented resource cap would be exceeded.
    #[error("resource cap exceeded: {what} = {value} (limit {limit})")]
    ResourceCap {
        what: &'static str,
        value: String,
        limit: String,
    },

    /// A rewrite was requested where its precondition does not hold.
    #[error("{rule} not applicable: {reason}")]
    NotApplicable { rule: String, reason: String },

    /// An internal identity failed. Indicates a bug, never bad input.
    #[error("internal consistency failure: {0}")]
    Internal(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub(crate) fn cap(what: &'static str, value: impl ToString, limit: impl ToString) -> Self {
        Error::ResourceCap {
            what,
            value: value.to_string(),
            limit: limit.to_string(),
        }
    }
}
