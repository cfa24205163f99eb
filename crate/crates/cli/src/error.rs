use serde_json::{json, Value};
use thiserror::Error;

use crate::document::Kind;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Malformed(String),

    #[error("no conversion from {} to {}", from.as_str(), to.as_str())]
    Unsupported { from: Kind, to: Kind },

    /// A conversion that exists in general but not for this input.
    #[error("cannot convert this {} to {}: {reason}", from.as_str(), to.as_str())]
    Impossible { from: Kind, to: Kind, reason: String },

    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl From<blochiso_core::Error> for CliError {
    fn from(e: blochiso_core::Error) -> Self {
        CliError::Malformed(e.to_string())
    }
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Malformed(_) | CliError::Io { .. } => 2,
            CliError::Unsupported { .. } | CliError::Impossible { .. } => 3,
        }
    }

    pub fn code_name(&self) -> &'static str {
        match self {
            CliError::Malformed(_) => "malformed_input",
            CliError::Io { .. } => "io",
            CliError::Unsupported { .. } => "unsupported_conversion",
            CliError::Impossible { .. } => "impossible_conversion",
        }
    }

    pub fn to_json(&self) -> Value {
        json!({ "error": { "code": self.code_name(), "message": self.to_string() } })
    }
}
