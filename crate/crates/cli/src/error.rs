use serde_json::{json, Value};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] isopower::Error),
    #[error("cannot read input: {0}")]
    Io(#[from] std::io::Error),
    #[error("malformed JSON input: {0}")]
    Json(#[from] serde_json::Error),
    #[error("cannot write CSV: {0}")]
    Csv(#[from] csv::Error),
}

impl CliError {
    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::Core(e) => e.kind(),
            CliError::Io(_) => "io",
            CliError::Json(_) => "invalid_input",
            CliError::Csv(_) => "io",
        }
    }

    /// 2 for bound violations, 1 for everything else.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(e) if e.is_bound_violation() => 2,
            _ => 1,
        }
    }

    pub fn to_json(&self, command: Option<&str>) -> Value {
        let mut context = json!({ "command": command });
        if let CliError::Core(isopower::Error::BoundExceeded { what, value, bound }) = self {
            context["what"] = json!(what);
            context["value"] = json!(value.to_string());
            context["bound"] = json!(bound.to_string());
        }
        json!({ "kind": self.kind(), "message": self.to_string(), "context": context })
    }
}
