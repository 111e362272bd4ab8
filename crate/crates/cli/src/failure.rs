//! Errors surfaced by the front end and their exit statuses.

use std::fmt;

use serde_json::{json, Value};
use triwell::{Error, ErrorClass};

use crate::config::ConfigError;

pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;
pub const EXIT_REGIME: i32 = 4;

#[derive(Debug)]
pub enum Failure {
    Config(ConfigError),
    Core(Error),
    Output { path: String, message: String },
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        Failure::Config(e)
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Config(e) => write!(f, "{e}"),
            Failure::Core(e) => write!(f, "{e}"),
            Failure::Output { path, message } => write!(f, "cannot write {path}: {message}"),
        }
    }
}

/// The configuration field a core error points back to, if any.
fn core_field(e: &Error) -> Option<&'static str> {
    match e {
        Error::InvalidParameter { name, .. } => Some(name),
        Error::TooShortInterval { .. } | Error::OverflowRisk { .. } => Some("T"),
        Error::GridInvariantViolation(msg) if msg.starts_with("x_max") => Some("x_max"),
        Error::GridInvariantViolation(_) => Some("n_points"),
        _ => None,
    }
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Config(_) | Failure::Output { .. } => EXIT_CONFIG,
            Failure::Core(e) => match e.class() {
                ErrorClass::Config => EXIT_CONFIG,
                ErrorClass::Numerical => EXIT_NUMERICAL,
                ErrorClass::Regime => EXIT_REGIME,
            },
        }
    }

    pub fn to_json(&self) -> Value {
        let (kind, class, field) = match self {
            Failure::Config(e) => ("invalid_config", "config", Some(e.field.clone())),
            Failure::Output { .. } => ("output_error", "config", Some("out".to_string())),
            Failure::Core(e) => {
                let class = match e.class() {
                    ErrorClass::Config => "config",
                    ErrorClass::Numerical => "numerical",
                    ErrorClass::Regime => "regime",
                };
                (e.kind(), class, core_field(e).map(str::to_string))
            }
        };
        json!({
            "error": {
                "kind": kind,
                "class": class,
                "field": field,
                "message": self.to_string(),
            }
        })
    }
}
