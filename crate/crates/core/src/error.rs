use std::io;

/// Errors produced across the laboratory.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("solver blew up (non-finite state) at step {step}")]
    BlowUp { step: usize },

    #[error("parameter {param} appears with odd exponent {exponent}; cannot eliminate it via the normalization")]
    ParityViolation { param: &'static str, exponent: u8 },

    #[error("Jacobian is rank deficient (rank {rank} of {n}); use the fold analysis instead")]
    RankDeficient { rank: usize, n: usize },

    #[error("not a fold point: {0}")]
    NotAFold(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidArgument(msg.into()))
}
