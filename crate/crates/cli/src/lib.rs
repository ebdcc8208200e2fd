//! The `gpm` command-line tool.

pub mod commands;
pub mod input;
pub mod report;
pub mod scenarios;

use std::fmt;

use clap::Parser;
use gpm_core::CoreError;

use crate::commands::Cli;
use crate::report::{bundle_json, Report};

#[derive(Debug)]
pub enum CliError {
    /// Bad arguments or unreadable input.
    Usage(String),
    /// The library rejected an input.
    Input(CoreError),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(msg) => f.write_str(msg),
            CliError::Input(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for CliError {}

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Output of one invocation: what to print and the exit status.
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

pub fn render(reports: &[Report], json: bool) -> String {
    if json {
        let v = match reports {
            [one] => one.to_json(),
            many => bundle_json(many),
        };
        format!("{}\n", serde_json::to_string_pretty(&v).expect("JSON values serialize"))
    } else {
        let mut out = reports.iter().map(Report::to_text).collect::<Vec<_>>().join("\n");
        if reports.len() > 1 {
            let passed = reports.iter().filter(|r| r.passed()).count();
            out.push_str(&format!("\n{passed}/{} scenarios passed\n", reports.len()));
        }
        out
    }
}

/// Runs the tool on `args` (including the program name).
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
            let text = e.render().to_string();
            return if code == EXIT_PASS {
                Outcome { stdout: text, stderr: String::new(), code }
            } else {
                Outcome { stdout: String::new(), stderr: text, code }
            };
        }
    };
    let json = cli.json;
    match commands::dispatch(cli.command) {
        Ok(reports) => {
            let code = if reports.iter().all(Report::passed) { EXIT_PASS } else { EXIT_FAIL };
            Outcome { stdout: render(&reports, json), stderr: String::new(), code }
        }
        Err(e) => Outcome { stdout: String::new(), stderr: format!("error: {e}\n"), code: EXIT_USAGE },
    }
}
