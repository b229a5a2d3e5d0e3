use std::fmt;
use std::time::Duration;

use serde::Serialize;
use serde_json::Value;
use sibtool_core::Error;

pub const REPORT_SCHEMA_VERSION: u32 = 1;

#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Io(String),
    Core(Error),
}

impl Failure {
    /// 2 usage, 3 input, 4 time guard; 1 when a result fails its own
    /// verification.
    pub fn exit_code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Io(_) => 3,
            Failure::Core(Error::TimeGuard(_)) => 4,
            Failure::Core(Error::Verification(_)) => 1,
            Failure::Core(_) => 3,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            Failure::Usage(_) => "usage",
            Failure::Io(_) => "io",
            Failure::Core(Error::TimeGuard(_)) => "time_guard",
            Failure::Core(Error::Verification(_)) => "verification",
            Failure::Core(_) => "input",
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Usage(m) | Failure::Io(m) => f.write_str(m),
            Failure::Core(e) => write!(f, "{e}"),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

#[derive(Serialize)]
pub struct Command {
    pub verb: String,
    pub argv: Vec<String>,
}

#[derive(Serialize)]
pub struct Timing {
    pub elapsed_ms: f64,
    pub threads: usize,
}

#[derive(Serialize)]
pub struct ErrorInfo {
    pub kind: &'static str,
    pub message: String,
    pub exit_code: u8,
}

#[derive(Serialize)]
pub struct Report {
    pub schema_version: u32,
    pub command: Command,
    pub result: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<ErrorInfo>,
    pub timing: Timing,
    pub warnings: Vec<String>,
}

impl Report {
    pub fn success(
        verb: String,
        argv: &[String],
        result: Value,
        elapsed: Duration,
        threads: usize,
        warnings: Vec<String>,
    ) -> Self {
        Report {
            schema_version: REPORT_SCHEMA_VERSION,
            command: Command { verb, argv: argv.to_vec() },
            result,
            error: None,
            timing: Timing { elapsed_ms: elapsed.as_secs_f64() * 1e3, threads },
            warnings,
        }
    }

    pub fn failure(verb: String, argv: &[String], failure: &Failure, elapsed: Duration, threads: usize) -> Self {
        Report {
            schema_version: REPORT_SCHEMA_VERSION,
            command: Command { verb, argv: argv.to_vec() },
            result: Value::Null,
            error: Some(ErrorInfo {
                kind: failure.kind(),
                message: failure.to_string(),
                exit_code: failure.exit_code(),
            }),
            timing: Timing { elapsed_ms: elapsed.as_secs_f64() * 1e3, threads },
            warnings: Vec::new(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }
}
