//! Command implementations behind the `influence` binary.
//!
//! Each `run_*` function returns the process exit code, or a [`Failure`]
//! carrying the code and a message for stderr.

use std::fmt;
use std::path::Path;

use influence_core::Error;

pub mod args;
pub mod evolve;
pub mod plot;
pub mod simulate;
pub mod svg;
pub mod transform;
pub mod verify;

pub const EXIT_OK: u8 = 0;
pub const EXIT_VERIFY_FAILED: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_RUNTIME: u8 = 3;

#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn usage(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }

    pub fn runtime(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_RUNTIME,
            message: message.into(),
        }
    }

    /// Config errors are the caller's fault; anything else happened while
    /// running.
    pub fn from_core(e: Error) -> Self {
        match e {
            Error::Config { .. } => Self::usage(e.to_string()),
            _ => Self::runtime(e.to_string()),
        }
    }

    /// For commands whose only inputs are flags: every core error is a bad
    /// argument.
    pub fn from_args(e: Error) -> Self {
        Self::usage(e.to_string())
    }

    pub fn io(path: &Path, e: std::io::Error) -> Self {
        Self::runtime(format!("{}: {e}", path.display()))
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

pub type CmdResult = Result<u8, Failure>;

pub fn run(cli: args::Cli) -> CmdResult {
    match cli.command {
        args::Command::Simulate(a) => simulate::run(a),
        args::Command::Verify(a) => verify::run(a),
        args::Command::Plot(a) => plot::run(a),
        args::Command::Evolve(a) => evolve::run(a),
        args::Command::Transform(a) => transform::run(a),
    }
}
