use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid {what}: {reason}")]
    Validation { what: &'static str, reason: String },

    #[error("illegal move at step {step}: {reason}")]
    IllegalMove { step: usize, reason: String },

    #[error("invariant mismatch for {name}: expected {expected}, computed {computed}")]
    InvariantMismatch {
        name: String,
        expected: String,
        computed: String,
    },

    #[error("torus marking rejected: {0}")]
    Marking(String),

    #[error("unsupported knot: {0}")]
    UnsupportedKnot(String),

    #[error("contract violation: {0}")]
    Contract(String),

    #[error("{0}")]
    Io(String),
}

impl Error {
    pub(crate) fn validation(what: &'static str, reason: impl Into<String>) -> Self {
        Error::Validation {
            what,
            reason: reason.into(),
        }
    }

    pub(crate) fn illegal(reason: impl Into<String>) -> Self {
        Error::IllegalMove {
            step: 0,
            reason: reason.into(),
        }
    }

    /// True for errors caused by malformed input rather than a failed check.
    pub fn is_input_error(&self) -> bool {
        matches!(self, Error::Parse(_) | Error::Validation { .. } | Error::Io(_))
    }
}

pub(crate) fn validation(what: &'static str, reason: impl Into<String>) -> Error {
    Error::validation(what, reason)
}
