//! The `macrospin` command-line tool.
//!
//! Exit codes: 0 on success (including infeasible scenarios and failed
//! verdicts, which are data), 1 for usage, parse and input validation
//! errors, 2 for size limits and other numerical failures. Errors print one
//! JSON line on stderr.

mod args;
mod render;

use std::io::Write as _;
use std::path::Path;

use clap::Parser;
use serde_json::{json, Value};

pub use args::{parse_angle, parse_direction, parse_direction_file, parse_grid, BetaGrid, Cli, Command, Format};

use crate::error::Error;

/// Reason for a non-zero exit.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Input(String),
    Library(Error),
    Output(String),
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Usage(_) | Failure::Input(_) => 1,
            Failure::Library(e) if e.is_input_error() => 1,
            Failure::Library(_) | Failure::Output(_) => 2,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            Failure::Usage(_) => "usage",
            Failure::Input(_) => "input",
            Failure::Library(e) => e.kind(),
            Failure::Output(_) => "output",
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Usage(m) | Failure::Input(m) | Failure::Output(m) => m.clone(),
            Failure::Library(e) => e.to_string(),
        }
    }

    /// Single-line JSON diagnostic.
    pub fn diagnostic(&self) -> String {
        json!({"error": self.kind(), "exit_code": self.exit_code(), "message": self.message()}).to_string()
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Library(e)
    }
}

/// Parses `argv` (program name first), runs the subcommand and returns the
/// process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion) => {
            print!("{e}");
            return 0;
        }
        Err(e) => {
            let text = e.to_string();
            let reason: Vec<&str> = text
                .lines()
                .map(str::trim)
                .take_while(|l| !l.starts_with("Usage:") && !l.starts_with("For more information"))
                .filter(|l| !l.is_empty())
                .collect();
            return report(Failure::Usage(reason.join(" ").trim_start_matches("error: ").to_string()));
        }
    };
    match execute(&cli) {
        Ok(()) => 0,
        Err(f) => report(f),
    }
}

fn report(failure: Failure) -> i32 {
    eprintln!("{}", failure.diagnostic());
    failure.exit_code()
}

fn thread_count(cli: &Cli) -> Result<Option<usize>, Failure> {
    if let Some(n) = cli.threads {
        return Ok(Some(n as usize));
    }
    match std::env::var("THREADS") {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(Failure::Usage(format!("THREADS must be a positive integer, got '{v}'"))),
        },
        Err(std::env::VarError::NotPresent) => Ok(None),
        Err(e) => Err(Failure::Usage(format!("THREADS: {e}"))),
    }
}

/// Runs the parsed command and writes its output.
pub fn execute(cli: &Cli) -> Result<(), Failure> {
    let threads = thread_count(cli)?;
    let output = match threads {
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Failure::Output(format!("thread pool: {e}")))?;
            pool.install(|| render::produce(cli))?
        }
        None => render::produce(cli)?,
    };
    match &cli.out {
        Some(path) => write_atomic(path, &output),
        None => std::io::stdout().lock().write_all(output.as_bytes()).map_err(|e| Failure::Output(e.to_string())),
    }
}

/// Writes through a temporary file in the target directory and renames it
/// into place.
fn write_atomic(path: &Path, contents: &str) -> Result<(), Failure> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let fail = |e: &dyn std::fmt::Display| Failure::Output(format!("{}: {e}", path.display()));
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| fail(&e))?;
    tmp.write_all(contents.as_bytes()).map_err(|e| fail(&e))?;
    tmp.as_file().sync_all().map_err(|e| fail(&e))?;
    tmp.persist(path).map_err(|e| fail(&e.error))?;
    Ok(())
}

/// Tool name, version and the resolved configuration. Thread count and
/// output destination are left out so results compare byte for byte.
fn provenance(command: &str, config: Value) -> Value {
    json!({
        "tool": env!("CARGO_PKG_NAME"),
        "version": env!("CARGO_PKG_VERSION"),
        "command": command,
        "config": config,
    })
}
