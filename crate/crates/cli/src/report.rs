use serde::Serialize;
use serde_json::{json, Value};
use sullivan::report::SCHEMA;
use sullivan::text::ParseError;
use sullivan::Error;

pub const EXIT_OK: u8 = 0;
pub const EXIT_VIOLATED: u8 = 1;
pub const EXIT_INPUT: u8 = 2;
pub const EXIT_RANGE: u8 = 3;

/// A finished command: exit code, text for people, data for programs.
pub struct Outcome {
    pub code: u8,
    pub human: String,
    pub data: Value,
}

impl Outcome {
    pub fn new(code: u8, human: String, data: impl Serialize) -> Self {
        let data = serde_json::to_value(data).expect("reports serialize");
        Outcome { code, human, data }
    }
}

#[derive(Debug, Serialize)]
pub struct Location {
    pub file: String,
    pub line: usize,
    pub column: usize,
}

/// A command that could not produce a report.
#[derive(Debug, Serialize)]
pub struct Failure {
    #[serde(skip)]
    pub code: u8,
    pub kind: String,
    pub message: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub location: Option<Location>,
}

impl Failure {
    pub fn input(message: impl Into<String>) -> Self {
        Failure { code: EXIT_INPUT, kind: "input".into(), message: message.into(), location: None }
    }

    pub fn parse(file: &str, e: &ParseError) -> Self {
        Failure {
            code: EXIT_INPUT,
            kind: e.kind.to_string(),
            message: e.message.clone(),
            location: Some(Location { file: file.to_string(), line: e.line, column: e.column }),
        }
    }

    pub fn human(&self) -> String {
        match &self.location {
            Some(l) => format!("{}:{}:{}: error: {}", l.file, l.line, l.column, self.message),
            None => format!("error: {}", self.message),
        }
    }
}

/// Exit codes for library errors: range problems are 3, certified failures
/// of a hypothesis are 1, everything else is bad input.
pub fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Range(_) | Error::BeyondBound { .. } => EXIT_RANGE,
        Error::OddCohomology { .. } | Error::Obstruction { .. } => EXIT_VIOLATED,
        _ => EXIT_INPUT,
    }
}

fn kind(e: &Error) -> &'static str {
    match e {
        Error::Range(_) | Error::BeyondBound { .. } => "range",
        Error::OddCohomology { .. } => "odd-cohomology",
        Error::Obstruction { .. } => "obstruction",
        Error::Unsupported(_) => "unsupported",
        Error::Precondition(_) => "precondition",
        _ => "input",
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure { code: exit_code(&e), kind: kind(&e).into(), message: e.to_string(), location: None }
    }
}

pub fn status(code: u8) -> &'static str {
    match code {
        EXIT_OK => "ok",
        EXIT_VIOLATED => "violated",
        EXIT_INPUT => "input-error",
        _ => "inconclusive",
    }
}

pub fn envelope(command: &str, code: u8, body: (&str, Value)) -> Value {
    let mut v = json!({
        "schema": SCHEMA,
        "command": command,
        "status": status(code),
        "exit_code": code,
    });
    v[body.0] = body.1;
    v
}
