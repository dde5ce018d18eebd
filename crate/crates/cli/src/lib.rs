//! Command-line driver for `ntop-core`: reads state sets, measurements and
//! family parameters as JSON, and reports NTOP feasibility, witness POVMs,
//! one-way protocols and residual-set analyses.
//!
//! Exit codes: 0 on success, 1 when the input is not mutually orthogonal or a
//! required measurement does not exist, 2 on malformed input, 3 on an
//! internal defect.

pub mod commands;
pub mod document;
pub mod error;

use std::ffi::OsString;
use std::io::{Read, Write};
use std::path::PathBuf;

use clap::{Parser, Subcommand};

pub use error::CliError;

#[derive(Debug, Parser)]
#[command(name = "ntop", version, about = "Local distinguishability of orthogonal multipartite states")]
pub struct Cli {
    /// Numerical tolerance for ranks, orthogonality and positivity
    #[arg(
        long,
        global = true,
        env = "NTOP_TOL",
        default_value_t = ntop_core::DEFAULT_TOL,
        allow_negative_numbers = true
    )]
    pub tol: f64,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Per-party NTOP feasibility report and summary verdict
    Check {
        /// State-set file, or `-` for standard input
        input: PathBuf,
        /// Also write the report as JSON (`-` replaces the text output)
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Build a two-outcome NTOP measurement for one party
    ConstructPovm {
        input: PathBuf,
        #[arg(long)]
        party: usize,
        /// Comma-separated coefficients over the complement generators
        /// (defaults to the first generator)
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        direction: Option<Vec<f64>>,
        /// Write the report, including the measurement, as JSON
        #[arg(long)]
        json: Option<PathBuf>,
        /// Write the bare measurement document (usable with `second-round`)
        #[arg(long)]
        emit: Option<PathBuf>,
    },
    /// Synthesize and simulate the one-way protocol for a 2 × n set
    OneWay {
        input: PathBuf,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Which parties can measure next after each outcome of a first measurement
    SecondRound {
        input: PathBuf,
        #[arg(long)]
        party: usize,
        #[arg(long)]
        measurement: PathBuf,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Verdict for the three-qubit GHZ family
    GhzVerdict {
        #[arg(long)]
        params: PathBuf,
        /// Sampled first measurements per feasible party
        #[arg(long, default_value_t = ntop_core::FalsificationConfig::default().samples)]
        samples: usize,
        #[arg(long, default_value_t = ntop_core::FalsificationConfig::default().seed)]
        seed: u64,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Print a built-in state set as JSON (omit the name to list them)
    Examples { name: Option<String> },
}

/// Runs the driver and returns the process exit code.
pub fn run<I, T>(args: I, stdin: &mut dyn Read, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let rendered = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(stderr, "{rendered}");
                2
            } else {
                let _ = write!(stdout, "{rendered}");
                0
            };
        }
    };
    let mut io = commands::Io { stdin, stdout };
    match commands::execute(&cli, &mut io) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}
