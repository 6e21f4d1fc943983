//! Command-line front end for `dag-inclusion`.

mod args;
mod commands;
mod render;

use std::fmt;
use std::path::Path;

pub use args::{Cli, Command, FuzzMode, SetArg};
use dag_inclusion::text::{parse_dag, parse_dot};
use dag_inclusion::{Dag, Error};
use serde_json::{json, Value};

pub const EXIT_YES: i32 = 0;
pub const EXIT_NO: i32 = 1;
pub const EXIT_ERROR: i32 = 2;

/// Environment variable capping exhaustive enumeration.
pub const MAX_N_VAR: &str = "DAG_INCLUSION_MAX_N";
pub const DEFAULT_MAX_N: usize = 5;

/// Result of one command: a verdict, its exit code, text for people and
/// fields merged into the JSON document.
#[derive(Debug)]
pub struct Outcome {
    pub verdict: String,
    pub code: i32,
    pub text: String,
    pub fields: Value,
}

impl Outcome {
    fn new(verdict: &str, yes: bool, text: String, fields: Value) -> Self {
        Outcome {
            verdict: verdict.into(),
            code: if yes { EXIT_YES } else { EXIT_NO },
            text,
            fields,
        }
    }
}

#[derive(Debug)]
pub struct CliError {
    pub file: Option<String>,
    pub error: Option<Error>,
    pub message: String,
}

impl CliError {
    fn plain(message: impl Into<String>) -> Self {
        CliError {
            file: None,
            error: None,
            message: message.into(),
        }
    }

    fn to_json(&self) -> Value {
        let (kind, line, column) = match &self.error {
            Some(e) => {
                let (line, column) = location(e);
                (error_kind(e), line, column)
            }
            None => ("Usage".to_string(), None, None),
        };
        json!({
            "kind": kind,
            "message": self.message,
            "file": self.file,
            "line": line,
            "column": column,
        })
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.file {
            Some(file) => write!(f, "{file}: {}", self.message),
            None => f.write_str(&self.message),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError {
            file: None,
            message: e.to_string(),
            error: Some(e),
        }
    }
}

fn error_kind(e: &Error) -> String {
    let inner = match e {
        Error::AtLine { source, .. } => source.as_ref(),
        other => other,
    };
    format!("{inner:?}")
        .chars()
        .take_while(|c| c.is_ascii_alphanumeric())
        .collect()
}

fn location(e: &Error) -> (Option<usize>, Option<usize>) {
    match e {
        Error::Syntax { line, column, .. } => (Some(*line), Some(*column)),
        Error::AtLine { line, .. } => (Some(*line), None),
        _ => (None, None),
    }
}

/// Reads a DAG file: the line format, or DOT when the extension is `.dot`
/// or `.gv` or the text starts with `digraph`.
pub fn read_dag(path: &Path) -> Result<Dag, CliError> {
    let file = path.display().to_string();
    let text = std::fs::read_to_string(path).map_err(|e| CliError {
        file: Some(file.clone()),
        error: None,
        message: e.to_string(),
    })?;
    let dot = matches!(
        path.extension().and_then(|e| e.to_str()),
        Some("dot" | "gv")
    ) || text.trim_start().starts_with("digraph");
    let parsed = if dot {
        parse_dot(&text)
    } else {
        parse_dag(&text)
    };
    parsed.map_err(|e| CliError {
        file: Some(file),
        message: e.to_string(),
        error: Some(e),
    })
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Dsep { .. } => "dsep",
        Command::Model { .. } => "model",
        Command::Equiv { .. } => "equiv",
        Command::Includes { .. } => "includes",
        Command::Conditions { .. } => "conditions",
        Command::OneEdge { .. } => "one-edge",
        Command::Meek { .. } => "meek",
        Command::Fuzz { .. } => "fuzz",
        Command::Enumerate { .. } => "enumerate",
        Command::Replay { .. } => "replay",
    }
}

/// Cap for exhaustive enumeration from the environment.
pub fn max_n() -> Result<usize, CliError> {
    match std::env::var(MAX_N_VAR) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| CliError::plain(format!("{MAX_N_VAR} must be a node count, got {v:?}"))),
        Err(_) => Ok(DEFAULT_MAX_N),
    }
}

/// Runs a parsed command line. Returns the exit code and what to print on
/// stdout and stderr.
pub fn run(cli: &Cli) -> (i32, String, String) {
    let name = command_name(&cli.command);
    match commands::dispatch(&cli.command) {
        Ok(out) => {
            if cli.json {
                let mut doc = json!({
                    "command": name,
                    "verdict": out.verdict,
                    "exit_code": out.code,
                });
                if let (Value::Object(doc), Value::Object(extra)) = (&mut doc, out.fields) {
                    doc.extend(extra);
                }
                (out.code, format!("{doc:#}\n"), String::new())
            } else {
                (out.code, out.text, String::new())
            }
        }
        Err(e) => {
            if cli.json {
                let doc = json!({
                    "command": name,
                    "verdict": "ERROR",
                    "exit_code": EXIT_ERROR,
                    "error": e.to_json(),
                });
                (EXIT_ERROR, format!("{doc:#}\n"), String::new())
            } else {
                (EXIT_ERROR, String::new(), format!("error: {e}\n"))
            }
        }
    }
}
