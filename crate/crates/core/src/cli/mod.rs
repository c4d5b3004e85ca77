//! Command-line frontend.
//!
//! Exit codes: 0 on success, 2 for invalid arguments, 3 for numerical
//! failures. `HYPSTAB_THREADS` caps the worker pool.

pub mod commands;
pub mod output;

use std::ffi::OsString;
use std::io::Write;

use clap::{Parser, Subcommand};

use crate::Error;
use commands::*;
use output::Report;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

pub const THREADS_ENV: &str = "HYPSTAB_THREADS";

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("invalid arguments: {0}")]
    Usage(String),
    #[error("invalid arguments to {op} ({params}): {source}")]
    InvalidParameters {
        op: String,
        params: String,
        source: Error,
    },
    #[error("numerical failure in {op} ({params}): {source}")]
    Numerical {
        op: String,
        params: String,
        source: Error,
    },
    #[error("cannot write {path}: {message}")]
    Io { path: String, message: String },
}

impl CliError {
    pub fn from_library(op: &str, params: String, source: Error) -> Self {
        let op = op.to_owned();
        if source.is_invalid_input() {
            CliError::InvalidParameters { op, params, source }
        } else {
            CliError::Numerical { op, params, source }
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Numerical { .. } => EXIT_NUMERICAL,
            _ => EXIT_USAGE,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "hypstab",
    version,
    about = "Stability of minimal hypersurfaces in hyperbolic space"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Tabulate the spherical catenoid stability functional F(a).
    SweepF(SweepFArgs),
    /// Locate the instability threshold c0 where F changes sign.
    FindC0(FindC0Args),
    /// Morse index of a spherical catenoid.
    Index(IndexArgs),
    /// Stability windows and profile checks for hyperbolic catenoids.
    HyperbolicWindow(HyperbolicWindowArgs),
    /// Curvature of a helicoid along t.
    Helicoid(HelicoidArgs),
    /// Sample points of a surface or generating curve.
    EmbedExport(EmbedExportArgs),
    /// Evaluate stability criteria.
    Criteria(CriteriaArgs),
}

impl Command {
    fn output(&self) -> &OutputArgs {
        match self {
            Command::SweepF(a) => &a.out,
            Command::FindC0(a) => &a.out,
            Command::Index(a) => &a.out,
            Command::HyperbolicWindow(a) => &a.out,
            Command::Helicoid(a) => &a.out,
            Command::EmbedExport(a) => &a.out,
            Command::Criteria(a) => &a.out,
        }
    }

    fn execute(&self) -> Result<Report, CliError> {
        match self {
            Command::SweepF(a) => sweep_f(a),
            Command::FindC0(a) => find_c0(a),
            Command::Index(a) => index(a),
            Command::HyperbolicWindow(a) => hyperbolic_window(a),
            Command::Helicoid(a) => helicoid(a),
            Command::EmbedExport(a) => embed_export(a),
            Command::Criteria(a) => criteria(a),
        }
    }
}

fn thread_cap(value: Option<OsString>) -> Result<Option<usize>, CliError> {
    let Some(raw) = value else { return Ok(None) };
    let text = raw.to_string_lossy();
    match text.trim().parse::<usize>() {
        Ok(n) if n >= 1 => Ok(Some(n)),
        _ => Err(CliError::Usage(format!(
            "{THREADS_ENV} must be a positive integer, got '{text}'"
        ))),
    }
}

fn execute_with_threads(command: &Command, threads: Option<usize>) -> Result<Report, CliError> {
    match threads {
        None => command.execute(),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| CliError::Usage(format!("cannot start {n} worker threads: {e}")))?
            .install(|| command.execute()),
    }
}

fn one_line(text: &str) -> String {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty())
        .collect::<Vec<_>>()
        .join(" ")
}

/// Runs the CLI on `args` (program name first). Results go to `--output` or
/// `out`; diagnostics go to `err` as a single line.
pub fn run<I, T>(
    args: I,
    threads: Option<OsString>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    EXIT_OK
                }
                ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => {
                    let _ = write!(err, "{e}");
                    EXIT_USAGE
                }
                _ => {
                    let first = e.to_string().lines().next().unwrap_or_default().to_owned();
                    let _ = writeln!(
                        err,
                        "hypstab: {}",
                        first.trim_start_matches("error: ").trim()
                    );
                    EXIT_USAGE
                }
            };
        }
    };
    let result = thread_cap(threads)
        .and_then(|n| execute_with_threads(&cli.command, n))
        .and_then(|report| {
            let opts = cli.command.output();
            let text = report.render(opts.format);
            match &opts.output {
                Some(path) => std::fs::write(path, text).map_err(|e| CliError::Io {
                    path: path.display().to_string(),
                    message: e.to_string(),
                }),
                None => out.write_all(text.as_bytes()).map_err(|e| CliError::Io {
                    path: "stdout".into(),
                    message: e.to_string(),
                }),
            }
        });
    match result {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "hypstab: {}", one_line(&e.to_string()));
            e.exit_code()
        }
    }
}

pub fn main() -> i32 {
    run(
        std::env::args_os(),
        std::env::var_os(THREADS_ENV),
        &mut std::io::stdout().lock(),
        &mut std::io::stderr().lock(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let argv = std::iter::once("hypstab").chain(args.iter().copied());
        let code = run(argv, None, &mut out, &mut err);
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn usage_errors_exit_two() {
        let (code, _, err) = call(&["sweep-f", "--bogus"]);
        assert_eq!(code, EXIT_USAGE);
        assert_eq!(err.lines().count(), 1);
        let (code, _, err) = call(&["index", "--a", "0.4"]);
        assert_eq!(code, EXIT_USAGE, "{err}");
        let (code, _, _) = call(&["helicoid", "--alpha", "1", "--t-grid", "0"]);
        assert_eq!(code, EXIT_USAGE);
        let (code, _, _) = call(&["embed-export", "--family", "spherical"]);
        assert_eq!(code, EXIT_USAGE);
    }

    #[test]
    fn help_and_version_succeed() {
        let (code, out, _) = call(&["--version"]);
        assert_eq!(code, EXIT_OK);
        assert!(out.contains(crate::VERSION));
        assert_eq!(call(&["helicoid", "--help"]).0, EXIT_OK);
    }

    #[test]
    fn thread_cap_parsing() {
        assert_eq!(thread_cap(None).unwrap(), None);
        assert_eq!(thread_cap(Some("3".into())).unwrap(), Some(3));
        assert!(thread_cap(Some("0".into())).is_err());
        assert!(thread_cap(Some("many".into())).is_err());
    }

    #[test]
    fn numerical_failures_exit_three() {
        let e = CliError::from_library("x", String::new(), Error::StepUnderflow { s: 1.0 });
        assert_eq!(e.exit_code(), EXIT_NUMERICAL);
        let e = CliError::from_library("x", String::new(), Error::InvalidInput("bad".into()));
        assert_eq!(e.exit_code(), EXIT_USAGE);
    }

    #[test]
    fn helicoid_flat_pitch_has_zero_curvature() {
        let (code, out, _) = call(&["helicoid", "--alpha", "0", "--t-grid", "100"]);
        assert_eq!(code, EXIT_OK);
        let t = output::Table::parse_csv(&out).unwrap();
        assert_eq!(t.rows.len(), 100);
        assert!(t.numbers("norm_a_sq").unwrap().iter().all(|&v| v == 0.0));
    }
}
