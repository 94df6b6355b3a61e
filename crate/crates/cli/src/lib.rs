//! Command-line front end: argument parsing, configuration, exit codes.

mod commands;
mod config;
mod output;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use siegel_core::Error;

pub use config::RunConfig;
pub use output::{Outcome, Table};

pub const EXIT_OK: i32 = 0;
pub const EXIT_IDENTITY: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_UNSUPPORTED: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "siegel", version, about = "Siegel series, local densities and Eisenstein coefficients in exact arithmetic")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone, Default)]
pub struct GlobalArgs {
    /// Output format
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Operation budget for enumerations
    #[arg(long, global = true)]
    pub max_ops: Option<u128>,
    /// Worker threads (default: all cores)
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// JSON configuration file; flags override it
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Seed for randomized checks
    #[arg(long, global = true)]
    pub seed: Option<u64>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, serde::Deserialize, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Closed,
    Interp,
    Series,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Limit {
    Display,
    ClosedForm,
}

/// A form given as 2T, or an extended GK datum at p.
#[derive(Args, Debug, Clone, Default)]
pub struct Input {
    /// JSON integer matrix 2T, e.g. [[2,1],[1,2]]
    #[arg(long)]
    pub matrix: Option<String>,
    /// Extended GK datum "a1,...,ag:e2,...,eg"
    #[arg(long)]
    pub egk: Option<String>,
    #[arg(long)]
    pub p: Option<u64>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Local invariants (D_T, e, ξ, η, Diff) of T
    Invariants(Input),
    /// Gross-Keating invariant of T at p
    Gk {
        #[command(flatten)]
        input: Input,
        /// Use the brute-force basis search (always used at p = 2)
        #[arg(long)]
        brute: bool,
    },
    /// Extended GK datum of T at an odd prime
    Egk(Input),
    /// The polynomial F_p^T
    Fpoly {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_enum, default_value = "closed")]
        method: Method,
        /// Series truncation K (default: smallest K that determines F)
        #[arg(long)]
        k: Option<u32>,
        /// Upper limit of the third double sum in the ternary formula
        #[arg(long, value_enum, default_value = "display")]
        limit: Limit,
    },
    /// Fourier coefficient C_4(T) of the central derivative
    C4(Input),
    /// C_4(T) through the ternary polynomial and the representation average
    Thm51(Input),
    /// Arithmetic degree of Z(T') for a ternary T'
    Degz(Input),
    /// C_4(T) = -2^8 3^2 (deg Z(T') + correction)
    Thm12(Input),
    /// Bounds on the correction term; sweeps admissible data without input
    Cor52(Input),
    /// Intersection table of T_{m1}, T_{m2}, T_{m3}
    Triple {
        m1: i64,
        m2: i64,
        m3: i64,
    },
    /// Mass of the maximal-order genus at p
    Mass {
        #[arg(long)]
        p: u64,
        /// Also count automorphisms of S_p directly
        #[arg(long)]
        check: bool,
    },
    /// Run acceptance suites
    Verify {
        /// Suite name or criterion number; all suites when omitted
        #[arg(long)]
        suite: Option<String>,
    },
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Unsupported { .. } | Error::Budget { .. } => EXIT_UNSUPPORTED,
        Error::Inconsistent(_) | Error::Unstable(_) => EXIT_IDENTITY,
        _ => EXIT_USAGE,
    }
}

/// Parses argv, runs the command, writes to the given streams and returns
/// the exit code.
pub fn run_with<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(err, "{}", e.render());
                return EXIT_USAGE;
            }
            let _ = write!(out, "{}", e.render());
            return EXIT_OK;
        }
    };
    let cfg = match RunConfig::resolve(&cli.global) {
        Ok(c) => c,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_USAGE;
        }
    };
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(cfg.jobs.unwrap_or(0)).build() {
        Ok(p) => p,
        Err(e) => {
            let _ = writeln!(err, "error: thread pool: {e}");
            return EXIT_USAGE;
        }
    };
    let result = pool.install(|| commands::dispatch(&cli.command, &cfg));
    match result {
        Ok(outcome) => {
            for line in &outcome.diagnostics {
                let _ = writeln!(err, "{line}");
            }
            if let Err(e) = outcome.write(cfg.format, out) {
                let _ = writeln!(err, "error: writing output: {e}");
                return EXIT_USAGE;
            }
            if outcome.ok {
                EXIT_OK
            } else {
                EXIT_IDENTITY
            }
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(argv, &mut stdout.lock(), &mut stderr.lock())
}
