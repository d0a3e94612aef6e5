use thiserror::Error;

/// Errors raised by the solvers and the experiment harness.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum CoopError {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("unsupported configuration: {0}")]
    Unsupported(String),

    /// The dual beamforming problem cannot meet its first SINR target.
    #[error("infeasible problem: {0}")]
    Infeasible(String),

    #[error("degenerate geometry: {0}")]
    Degenerate(String),

    #[error("internal invariant violated: {0}")]
    Internal(String),

    #[error("config error{}: {msg}", line.map(|l| format!(" (line {l})")).unwrap_or_default())]
    Config { line: Option<usize>, msg: String },
}

impl CoopError {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        CoopError::InvalidInput(msg.into())
    }

    pub(crate) fn config(line: Option<usize>, msg: impl Into<String>) -> Self {
        CoopError::Config {
            line,
            msg: msg.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, CoopError>;
