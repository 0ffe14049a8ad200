use motionsph_core::Error;
use serde_json::{json, Value};

use crate::report::SCHEMA;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error("invalid configuration at {location}: {message}")]
    Config { location: String, message: String },

    #[error(transparent)]
    Core(#[from] Error),

    #[error("output failed: {0}")]
    Io(#[from] std::io::Error),

    #[error("csv output failed: {0}")]
    Csv(#[from] csv::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Config { .. } => 2,
            CliError::Core(e) => match e {
                Error::Invariant(_) | Error::ProbeBudgetExhausted(_) | Error::StepUnderflow(_) => 1,
                _ => 2,
            },
            CliError::Io(_) | CliError::Csv(_) => 1,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::Config { .. } => "config",
            CliError::Core(e) => match e {
                Error::UnsupportedSystem(_) => "unsupported_system",
                Error::Parse(_) => "parse",
                Error::Dimension { .. } => "dimension",
                Error::Precondition(_) => "precondition",
                Error::SingularParameter | Error::RegularParameter | Error::WallPoint => "redirect",
                Error::NotDominant => "not_dominant",
                Error::ProbeCollision | Error::ProbeBudgetExhausted(_) => "probe",
                Error::StepUnderflow(_) => "step_underflow",
                Error::RepeatedFrequency | Error::Invariant(_) => "invariant",
            },
            CliError::Io(_) | CliError::Csv(_) => "io",
        }
    }

    pub fn to_json(&self) -> Value {
        let mut err = json!({ "kind": self.kind(), "message": self.to_string() });
        if let CliError::Config { location, .. } = self {
            err["location"] = json!(location);
        }
        json!({ "schema": SCHEMA, "error": err })
    }
}
