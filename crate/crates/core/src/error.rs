use thiserror::Error;

/// Errors produced by the spectrum-access library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("SAP index {index} out of range for {n_cells} cells")]
    IndexOutOfRange { index: usize, n_cells: usize },

    #[error("channel {channel} outside 1..={n_channels}")]
    ChannelOutOfRange { channel: usize, n_channels: usize },

    #[error("invalid action profile: {0}")]
    InvalidProfile(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("validation error: {0}")]
    Validation(String),

    #[error("dynamics did not converge within {max_rounds} rounds")]
    NonConvergence { max_rounds: usize },

    #[error("oracle refused: joint action space has {size} profiles, cap is {cap}")]
    OracleCapExceeded { size: u128, cap: u128 },

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }
}
