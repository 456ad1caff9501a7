//! `quadsum`: evaluate and verify quadratic Gauss sums, finite zeta
//! functions, multidimensional reciprocity and theta identities.
//!
//! Exit status is 0 on success, 1 when a checked identity misses the
//! tolerance, and 2 on any input error.

mod commands;
mod input;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "quadsum", version, about = "Quadratic Gauss sums, finite zeta functions and reciprocity checks")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalOpts {
    /// Evaluation backend for sums of roots of unity.
    #[arg(long, global = true, value_enum, default_value_t = BackendArg::Float)]
    pub backend: BackendArg,
    /// Working precision in bits.
    #[arg(long = "prec-bits", global = true, default_value_t = 128)]
    pub prec_bits: u32,
    /// Tolerance for residual checks.
    #[arg(long, global = true, default_value_t = 1e-25)]
    pub tol: f64,
    /// Print the report as JSON (the default).
    #[arg(long, global = true, conflicts_with = "csv")]
    pub json: bool,
    /// Print the report as CSV rows.
    #[arg(long, global = true)]
    pub csv: bool,
    /// Worker threads (used by selftest).
    #[arg(long, global = true, default_value_t = 1)]
    pub threads: usize,
    /// JSON file holding matrix or vector inputs.
    #[arg(long, global = true)]
    pub file: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BackendArg {
    Exact,
    Float,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum NdForm {
    /// Sum over x mod B with phase x^T t x / 2 + x^T s.
    S,
    /// The form in (t, c) summing over B^{-1} Z^n / Z^n.
    Dual,
    /// s = 0, requiring B^T A even.
    Zero,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Identity {
    /// Jacobi theta under tau -> -1/tau.
    Jfe,
    /// Progression theta under tau -> -1/tau.
    Tkm,
    /// Averaged theta identity for (a, b, c).
    Average,
    /// Riemann theta under tau -> -tau^{-1}.
    Rfe,
    /// Finite-tau form of the multidimensional reciprocity law.
    Thmb,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Normalized Gauss sum S(a, b, c) and its reciprocity check.
    GaussSum {
        #[arg(long, allow_negative_numbers = true)]
        a: i64,
        #[arg(long, allow_negative_numbers = true)]
        b: i64,
        #[arg(long, allow_negative_numbers = true)]
        c: i64,
    },
    /// u(r) by direct summation, with its closed form and reciprocity.
    UValue {
        /// Rational argument p/q.
        #[arg(long, allow_negative_numbers = true)]
        r: String,
    },
    /// Reciprocity residual for S(a, b, c).
    RecipCheck {
        #[arg(long, allow_negative_numbers = true)]
        a: i64,
        #[arg(long, allow_negative_numbers = true)]
        b: i64,
        #[arg(long, allow_negative_numbers = true)]
        c: i64,
    },
    /// Z_n at given points, or its zeros on the critical line.
    Zeta {
        #[arg(long)]
        n: u64,
        /// Evaluation point "re,im" (repeatable).
        #[arg(long, allow_negative_numbers = true, required_unless_present = "zeros")]
        s: Vec<String>,
        /// List zeros with t in [T_MIN, T_MAX].
        #[arg(long, num_args = 2, value_names = ["T_MIN", "T_MAX"], allow_negative_numbers = true, conflicts_with = "s")]
        zeros: Option<Vec<f64>>,
    },
    /// Reduced form t = A B^{-1} of a rational matrix.
    ReducedForm {
        /// Matrix as JSON rows of "p/q" strings or integers.
        #[arg(long)]
        matrix: Option<String>,
    },
    /// Multidimensional reciprocity for a symmetric rational t.
    NdRecip {
        #[arg(long)]
        t: Option<String>,
        /// Linear term s (for --form s).
        #[arg(long, allow_negative_numbers = true)]
        s: Option<String>,
        /// Linear term c (for --form dual).
        #[arg(long, allow_negative_numbers = true)]
        c: Option<String>,
        #[arg(long, value_enum, default_value_t = NdForm::S)]
        form: NdForm,
    },
    /// Riemann theta at (z, tau).
    Theta {
        #[arg(long, allow_negative_numbers = true)]
        z: Option<String>,
        #[arg(long, allow_negative_numbers = true)]
        tau: Option<String>,
    },
    /// Check a named theta identity.
    ThetaCheck {
        #[arg(value_enum)]
        identity: Identity,
        #[arg(long, allow_negative_numbers = true)]
        z: Option<String>,
        #[arg(long, allow_negative_numbers = true)]
        tau: Option<String>,
        #[arg(long, allow_negative_numbers = true)]
        k: Option<i64>,
        #[arg(long, allow_negative_numbers = true)]
        m: Option<i64>,
        #[arg(long, allow_negative_numbers = true)]
        a: Option<i64>,
        #[arg(long, allow_negative_numbers = true)]
        b: Option<i64>,
        /// Integer c for `average`, vector c for `thmb`.
        #[arg(long, allow_negative_numbers = true)]
        c: Option<String>,
        /// Matrix t for `thmb`.
        #[arg(long)]
        t: Option<String>,
        /// For `thmb`: evaluate the large-height limit at tau = i height I instead.
        #[arg(long)]
        height: Option<f64>,
    },
    /// Run the acceptance criteria and print a pass/fail table.
    Selftest {
        /// Criterion number to run (repeatable; default all).
        #[arg(long)]
        criterion: Vec<u32>,
        #[arg(long, default_value_t = quadsum_core::selftest::DEFAULT_SEED)]
        seed: u64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    match commands::run(&cli) {
        Ok(mut report) => {
            report.elapsed_ms = start.elapsed().as_millis().to_string();
            if cli.global.csv {
                print!("{}", report.to_csv());
            } else {
                println!("{}", report.to_json());
            }
            if report.passed == Some(false) {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
