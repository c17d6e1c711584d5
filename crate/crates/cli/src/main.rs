mod args;
mod cc;
mod config;
mod curvature;
mod geodesic;
mod json;
mod verify;

use std::fs;
use std::io::Write;
use std::path::Path;
use std::process::ExitCode;

use clap::{CommandFactory, Parser};
use heiscone::GeomError;

use args::{Cli, Command};

pub const EXIT_CHECK_FAILED: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_UNSOLVABLE: u8 = 3;

/// A failed command: exit code plus a message for stderr.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn usage(message: impl ToString) -> Self {
        Self {
            code: EXIT_USAGE,
            message: message.to_string(),
        }
    }
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        match e.downcast::<GeomError>() {
            Ok(g) => g.into(),
            Err(e) => Self::usage(format!("{e:#}")),
        }
    }
}

impl From<GeomError> for Failure {
    /// Shooting that does not converge is a computational failure; anything
    /// else from the library is a bad point or parameter.
    fn from(e: GeomError) -> Self {
        let code = match e {
            GeomError::NoConvergence { .. } | GeomError::StepUnderflow { .. } => EXIT_CHECK_FAILED,
            _ => EXIT_USAGE,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

pub type CmdResult = Result<u8, Failure>;

/// Writes to `out` if given, else stdout.
pub fn emit(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| Failure::usage(format!("writing {}: {e}", p.display()))),
        None => {
            let mut so = std::io::stdout().lock();
            so.write_all(text.as_bytes())
                .and_then(|_| so.flush())
                .map_err(|e| Failure::usage(format!("writing stdout: {e}")))
        }
    }
}

fn load_args() -> Result<Vec<String>, Failure> {
    let argv: Vec<String> = std::env::args().collect();
    let Some(path) = config::locate(&argv) else {
        return Ok(argv);
    };
    let text = fs::read_to_string(&path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
    let entries = config::parse(&text).map_err(|e| Failure::usage(format!("{}: {e:#}", path.display())))?;
    config::inject(&Cli::command(), argv, &entries).map_err(|e| Failure::usage(format!("{}: {e:#}", path.display())))
}

fn run() -> CmdResult {
    let argv = load_args()?;
    let cli = Cli::try_parse_from(argv).unwrap_or_else(|e| e.exit());
    match cli.command {
        Command::Verify(a) => verify::run(a),
        Command::Geodesic(a) => geodesic::run(a),
        Command::Curvature(a) => curvature::run(a),
        Command::CcDist(a) => cc::run(a),
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
