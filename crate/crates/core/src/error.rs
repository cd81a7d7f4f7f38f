use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("base space mismatch: {left} points vs {right} points")]
    BaseMismatch { left: usize, right: usize },

    #[error("invalid input: {0}")]
    Input(String),

    #[error("instance too large for {solver}: {detail}")]
    SizeCap { solver: &'static str, detail: String },

    #[error("relator {relator} is violated at vertex {vertex}")]
    RelatorViolation { relator: String, vertex: usize },

    #[error("action is not transitive ({orbits} orbits)")]
    Intransitive { orbits: usize },

    #[error("parse error at {location}: {message}")]
    Parse { location: String, message: String },
}

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub(crate) fn parse(location: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Parse {
            location: location.into(),
            message: message.into(),
        }
    }
}
