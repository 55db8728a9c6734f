use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("usage: {0}")]
    Usage(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    #[error("invalid fault location: {0}")]
    InvalidFault(String),

    #[error("outcome {0} has odd parity and is outside the codespace")]
    Rejected(String),

    #[error("all {shots} shots were rejected by post-selection")]
    AllRejected { shots: u64 },

    #[error("unknown circuit `{0}`")]
    UnknownCircuit(String),

    #[error("unknown logical gate `{label}` in the {dictionary} dictionary")]
    UnknownGate { label: String, dictionary: String },

    #[error("probability {name} = {value} is outside [0, 1]")]
    InvalidProbability { name: &'static str, value: f64 },

    #[error("circuit JSON: {0}")]
    Json(String),
}

impl Error {
    pub(crate) fn usage(msg: impl Into<String>) -> Self {
        Error::Usage(msg.into())
    }
}
