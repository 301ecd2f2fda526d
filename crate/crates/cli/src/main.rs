//! `superalg`: file-based front end to the superalg kernel. Every command
//! prints one JSON record `{status, payload, diagnostics}` with all numbers
//! written as decimal strings.

mod commands;

use clap::Parser;
use serde::Serialize;
use serde_json::Value;
use std::process::ExitCode;

pub use commands::Cli;

/// Exit code 1: the input parsed but the operation rejected it.
/// Exit code 2: the input could not be read or parsed.
#[derive(Debug)]
pub enum Failure {
    Domain(String),
    Malformed(String),
}

impl Failure {
    pub fn domain(e: impl std::fmt::Display) -> Self {
        Failure::Domain(e.to_string())
    }

    fn exit_code(&self) -> u8 {
        match self {
            Failure::Domain(_) => 1,
            Failure::Malformed(_) => 2,
        }
    }
}

/// Rendered command output: a payload, or plain text for table views.
pub enum Output {
    Record(Value),
    Text(String),
    /// A record whose verdict still fails the command (exit code 1).
    Failed(Value, Vec<String>),
}

#[derive(Serialize)]
struct CommandResult<'a> {
    status: &'static str,
    payload: &'a Value,
    diagnostics: &'a [String],
}

/// Replaces every JSON number by its decimal string.
pub fn stringify_numbers(v: Value) -> Value {
    match v {
        Value::Number(n) => Value::String(n.to_string()),
        Value::Array(a) => Value::Array(a.into_iter().map(stringify_numbers).collect()),
        Value::Object(o) => Value::Object(o.into_iter().map(|(k, v)| (k, stringify_numbers(v))).collect()),
        other => other,
    }
}

fn emit(status: &'static str, payload: &Value, diagnostics: &[String]) {
    let record = CommandResult {
        status,
        payload,
        diagnostics,
    };
    let text = serde_json::to_string_pretty(&record).expect("records serialize");
    println!("{text}");
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(cli) {
        Ok(Output::Record(v)) => {
            emit("ok", &stringify_numbers(v), &[]);
            ExitCode::SUCCESS
        }
        Ok(Output::Text(t)) => {
            print!("{t}");
            ExitCode::SUCCESS
        }
        Ok(Output::Failed(v, diagnostics)) => {
            emit("error", &stringify_numbers(v), &diagnostics);
            ExitCode::from(1)
        }
        Err(f) => {
            let msg = match &f {
                Failure::Domain(m) | Failure::Malformed(m) => m.clone(),
            };
            emit("error", &Value::Null, &[msg]);
            ExitCode::from(f.exit_code())
        }
    }
}
