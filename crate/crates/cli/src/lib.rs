//! Command-line front end for `hierq-core`.
//!
//! Every subcommand is a thin adapter over one library call. [`run`] parses
//! an argument list and returns the payload instead of printing it, so the
//! binary and the tests share one code path.

mod args;
mod commands;

use std::ffi::OsString;

use clap::error::ErrorKind;
use clap::Parser;

pub use args::Cli;
pub use commands::{
    CollapseReport, EulerReport, HierMeasureReport, InnerReport, LandauerReport, MetricReport,
    ZpReport,
};

/// Exit status and captured output of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommandResult {
    /// 0 on success, 1 on a domain error, 2 on a usage error.
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub const EXIT_OK: i32 = 0;
pub const EXIT_DOMAIN: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

impl CommandResult {
    fn ok(stdout: String) -> Self {
        CommandResult {
            code: EXIT_OK,
            stdout,
            stderr: String::new(),
        }
    }

    fn fail(code: i32, stderr: String) -> Self {
        CommandResult {
            code,
            stdout: String::new(),
            stderr,
        }
    }
}

/// Parses `argv` (program name first) and runs the selected subcommand.
pub fn run<I, T>(argv: I) -> CommandResult
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => CommandResult::ok(text),
                _ => CommandResult::fail(EXIT_USAGE, text),
            };
        }
    };

    let payload = match cli.threads {
        Some(0) => {
            return CommandResult::fail(EXIT_USAGE, "error: --threads must be at least 1\n".into())
        }
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(|| commands::dispatch(&cli.command)),
            Err(e) => Err(format!("cannot start thread pool: {e}")),
        },
        None => commands::dispatch(&cli.command),
    };

    match payload {
        Ok(text) => match &cli.out {
            Some(path) => match std::fs::write(path, &text) {
                Ok(()) => CommandResult::ok(String::new()),
                Err(e) => {
                    CommandResult::fail(EXIT_DOMAIN, format!("error: {}: {e}\n", path.display()))
                }
            },
            None => CommandResult::ok(text),
        },
        Err(msg) => CommandResult::fail(EXIT_DOMAIN, format!("error: {msg}\n")),
    }
}
