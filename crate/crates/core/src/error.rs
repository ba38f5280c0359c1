use thiserror::Error;

/// Errors raised by the simulator, the policies, the environment and the harness.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// The input cannot be normalized (for example an all-zero feature vector).
    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    /// A caller asked the environment to perform a move it must have masked out.
    #[error("illegal action {action} for agent {agent} at {position:?}")]
    IllegalAction {
        agent: usize,
        action: usize,
        position: (usize, usize),
    },

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}
