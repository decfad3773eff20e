//! Command-line front end: reads a problem file and reports characteristic
//! roots, the solution basis, verification results and point values.

pub mod commands;
pub mod spec_file;

use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use thiserror::Error;

use crate::commands::VerifySettings;
use crate::spec_file::{load_spec, parse_mode};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{}{message}", line_prefix(.line))]
    Parse { line: Option<usize>, message: String },
    #[error("{}{message}", line_prefix(.line))]
    Validation { line: Option<usize>, message: String },
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Io(String),
    #[error(transparent)]
    Core(#[from] itersing::Error),
}

fn line_prefix(line: &Option<usize>) -> String {
    line.map(|l| format!("line {l}: ")).unwrap_or_default()
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

/// Outcome of a command that ran to completion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Success,
    ChecksFailed,
}

impl Status {
    pub fn code(self) -> i32 {
        match self {
            Status::Success => 0,
            Status::ChecksFailed => 1,
        }
    }
}

/// Exit code for errors that stop a command before it produces a result.
pub const ERROR_EXIT_CODE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "itersing",
    version,
    about = "Radial log-power solutions of iterated singular Euler-type equations"
)]
pub struct Cli {
    /// Write the report to this file instead of standard output.
    #[arg(short, long, global = true)]
    pub output: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Characteristic quantities and root classification of every factor.
    Roots {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// List the solution basis.
    Solve {
        file: PathBuf,
        #[arg(long)]
        json: bool,
        /// paper | combined
        #[arg(long)]
        mode: Option<String>,
    },
    /// Check every basis term symbolically and by finite differences.
    Verify {
        file: PathBuf,
        #[arg(long)]
        points: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long = "h-rel")]
        h_rel: Option<f64>,
        /// paper | combined
        #[arg(long)]
        mode: Option<String>,
        #[arg(long)]
        json: bool,
        /// Append the non-solution term r^E to the basis.
        #[arg(long, hide = true, allow_hyphen_values = true)]
        inject_exponent: Option<f64>,
    },
    /// Evaluate the coefficient-weighted basis sum at points.
    Eval {
        file: PathBuf,
        /// Point as x1,...,xn; may be repeated.
        #[arg(long = "at", required = true, allow_hyphen_values = true)]
        at: Vec<String>,
        /// One coefficient per basis term; all ones when omitted.
        #[arg(long, allow_hyphen_values = true)]
        coeffs: Option<String>,
        /// paper | combined
        #[arg(long)]
        mode: Option<String>,
        #[arg(long)]
        json: bool,
    },
}

fn parse_list(s: &str, what: &str) -> Result<Vec<f64>, CliError> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| CliError::Usage(format!("cannot parse {what} entry {t:?} in {s:?}")))
        })
        .collect()
}

fn resolve_mode(flag: Option<&str>, default: itersing::BasisMode) -> Result<itersing::BasisMode, CliError> {
    match flag {
        None => Ok(default),
        Some(s) => {
            parse_mode(s).ok_or_else(|| CliError::Usage(format!("unknown mode {s:?}; expected paper or combined")))
        }
    }
}

/// Runs a parsed command line, writing its report to `out`.
pub fn run(cli: &Cli, out: &mut dyn Write) -> Result<Status, CliError> {
    match &cli.command {
        Command::Roots { file, json } => commands::roots(&load_spec(file)?, *json, out),
        Command::Solve { file, json, mode } => {
            let loaded = load_spec(file)?;
            let mode = resolve_mode(mode.as_deref(), loaded.options.mode)?;
            commands::solve(&loaded, mode, *json, out)
        }
        Command::Verify {
            file,
            points,
            seed,
            h_rel,
            mode,
            json,
            inject_exponent,
        } => {
            let loaded = load_spec(file)?;
            let o = &loaded.options;
            let h_rel = h_rel.unwrap_or(o.h_rel);
            if h_rel.is_nan() || h_rel <= 0.0 {
                return Err(CliError::Usage(format!("--h-rel must be positive (got {h_rel})")));
            }
            let settings = VerifySettings {
                mode: resolve_mode(mode.as_deref(), o.mode)?,
                points: points.unwrap_or(o.points),
                seed: seed.unwrap_or(o.seed),
                h_rel,
                inject_exponent: *inject_exponent,
            };
            commands::verify(&loaded, &settings, *json, out)
        }
        Command::Eval {
            file,
            at,
            coeffs,
            mode,
            json,
        } => {
            let loaded = load_spec(file)?;
            let mode = resolve_mode(mode.as_deref(), loaded.options.mode)?;
            let points = at
                .iter()
                .map(|s| parse_list(s, "coordinate"))
                .collect::<Result<Vec<_>, _>>()?;
            let coeffs = coeffs.as_deref().map(|s| parse_list(s, "coefficient")).transpose()?;
            commands::eval(&loaded, mode, &points, coeffs.as_deref(), *json, out)
        }
    }
}

/// Runs `cli`, routing output to `--output` when given; returns the exit code.
pub fn main_with(cli: &Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let result = match &cli.output {
        Some(path) => std::fs::File::create(path)
            .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
            .and_then(|mut f| run(cli, &mut f)),
        None => run(cli, stdout),
    };
    match result {
        Ok(status) => status.code(),
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            ERROR_EXIT_CODE
        }
    }
}
