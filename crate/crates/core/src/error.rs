use thiserror::Error;

use crate::gabor::FrameBounds;

/// Errors raised by the algebraic and numerical layers.
#[derive(Debug, Error)]
pub enum Error {
    /// Objects built over different groups, malformed coordinates, and similar shape errors.
    #[error("structural error: {0}")]
    Structural(String),

    /// Two twisted sequences, windows or contexts that live on different domains.
    #[error("domain mismatch: {0}")]
    DomainMismatch(String),

    /// An operation that needs an invertible frame operator got a system that is not a frame.
    #[error("not a frame: lower bound {} (upper bound {})", .0.lower, .0.upper)]
    NotAFrame(FrameBounds),

    /// Malformed external input (JSON specs, window descriptors, rationals).
    #[error("parse error in {field}: {message}")]
    Parse { field: String, message: String },
}

impl Error {
    pub(crate) fn structural(msg: impl Into<String>) -> Self {
        Error::Structural(msg.into())
    }

    pub(crate) fn mismatch(msg: impl Into<String>) -> Self {
        Error::DomainMismatch(msg.into())
    }

    pub(crate) fn parse(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Parse {
            field: field.into(),
            message: message.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
