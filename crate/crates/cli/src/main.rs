//! `zn`: generating graphs of Z_n from the command line.

mod commands;
mod output;

use std::ffi::OsString;
use std::ops::RangeInclusive;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use zn::oracle::{Check, Tolerances};

use output::{Format, Precision};

#[derive(Debug, Parser)]
#[command(
    name = "zn",
    version,
    about = "Generating graphs of the cyclic groups Z_n"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    #[command(flatten)]
    pub global: Global,
}

#[derive(Debug, Args)]
pub struct Global {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,

    /// Write to this file instead of stdout.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,

    /// Number formatting: six significant digits or full precision.
    #[arg(long, global = true, value_enum, default_value_t = Precision::Six)]
    pub precision: Precision,

    /// Omit the `meta` object (with its timestamp) and timings from JSON.
    #[arg(long, global = true)]
    pub no_meta: bool,

    /// Largest n for dense graphs and matrices.
    #[arg(long, global = true, env = "ZN_DENSE_LIMIT", default_value_t = zn::graph::DEFAULT_DENSE_LIMIT)]
    pub dense_limit: u64,

    #[command(flatten)]
    pub tol: TolArgs,
}

#[derive(Debug, Args)]
pub struct TolArgs {
    /// Tolerance for assembled vs dense spectra.
    #[arg(long, global = true)]
    pub tol_spectrum: Option<f64>,
    /// Tolerance for {0, phi(n), n} among the quotient eigenvalues.
    #[arg(long, global = true)]
    pub tol_known: Option<f64>,
    /// Tolerance for eig(T^A) vs eig(Q_n).
    #[arg(long, global = true)]
    pub tol_similarity: Option<f64>,
    /// Tolerance for the tensor reconstruction.
    #[arg(long, global = true)]
    pub tol_tensor: Option<f64>,
    /// Tolerance for distinct Laplacian values under scaling.
    #[arg(long, global = true)]
    pub tol_distinct: Option<f64>,
    /// Relative slack on Weyl interval endpoints.
    #[arg(long, global = true)]
    pub tol_weyl: Option<f64>,
}

impl TolArgs {
    pub fn resolve(&self) -> Tolerances {
        let d = Tolerances::default();
        Tolerances {
            spectrum: self.tol_spectrum.unwrap_or(d.spectrum),
            known: self.tol_known.unwrap_or(d.known),
            similarity: self.tol_similarity.unwrap_or(d.similarity),
            tensor: self.tol_tensor.unwrap_or(d.tensor),
            distinct: self.tol_distinct.unwrap_or(d.distinct),
            weyl: self.tol_weyl.unwrap_or(d.weyl),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MatrixArg {
    /// Adjacency matrix (quotient T^A / Q_n).
    Adj,
    /// Laplacian matrix (quotient M / L_Q).
    Lap,
    /// The perturbed quotient Q~_n.
    Qtilde,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Divisor-class table: divisor, binary label, size, degree, neighbor classes.
    Classes {
        #[arg(value_parser = parse_n)]
        n: u64,
        /// Also list the members of every class.
        #[arg(long)]
        members: bool,
    },
    /// Minimal generating sets of size k (every k up to omega(n) by default).
    Gensets {
        #[arg(value_parser = parse_n)]
        n: u64,
        #[arg(long, short)]
        k: Option<usize>,
        /// List the sets themselves, not only the class combinations.
        #[arg(long)]
        expand: bool,
    },
    /// Graph invariants.
    Props {
        #[arg(value_parser = parse_n)]
        n: u64,
    },
    /// DOT export of E_n, or of the divisor graph H with --h-graph.
    Graph {
        #[arg(value_parser = parse_n)]
        n: u64,
        /// DOT output path.
        #[arg(long)]
        dot: Option<PathBuf>,
        #[arg(long)]
        h_graph: bool,
    },
    /// Adjacency or Laplacian spectrum through the quotient matrices.
    Spectrum {
        #[arg(value_parser = parse_n)]
        n: u64,
        #[arg(long, value_enum)]
        matrix: MatrixArg,
        /// Also eigensolve the dense matrix and report the deviation.
        #[arg(long)]
        full: bool,
        /// Per-index Weyl intervals for the quotient eigenvalues.
        #[arg(long)]
        bounds: bool,
    },
    /// Reproduce the class table for n = 30 and the bound tables for n = 15.
    Tables {
        #[arg(long)]
        paper: bool,
    },
    /// Compare closed forms with brute-force oracles over a range of n.
    Verify {
        #[arg(long, value_parser = parse_range)]
        range: RangeInclusive<u64>,
        /// Comma-separated check names, or `all`.
        #[arg(long, default_value = "all", value_parser = parse_checks)]
        checks: CheckList,
    },
    /// Time quotient-level spectra against dense eigensolves.
    Bench {
        #[arg(long, value_parser = parse_range)]
        range: RangeInclusive<u64>,
        #[arg(long, default_value_t = 1)]
        step: u64,
    },
}

fn parse_n(s: &str) -> Result<u64, String> {
    let n: u64 = s
        .parse()
        .map_err(|e| format!("`{s}` is not a non-negative integer: {e}"))?;
    if n < 2 {
        return Err(format!("n must be at least 2, got {n}"));
    }
    Ok(n)
}

fn parse_range(s: &str) -> Result<RangeInclusive<u64>, String> {
    let (lo, hi) = s
        .split_once("..")
        .ok_or_else(|| format!("expected LO..HI, got `{s}`"))?;
    let hi = hi.strip_prefix('=').unwrap_or(hi);
    let lo: u64 = lo
        .trim()
        .parse()
        .map_err(|e| format!("bad lower bound `{lo}`: {e}"))?;
    let hi: u64 = hi
        .trim()
        .parse()
        .map_err(|e| format!("bad upper bound `{hi}`: {e}"))?;
    if lo > hi {
        return Err(format!("empty range: {lo} > {hi}"));
    }
    Ok(lo..=hi)
}

#[derive(Debug, Clone)]
pub struct CheckList(pub Vec<Check>);

fn parse_checks(s: &str) -> Result<CheckList, String> {
    Check::parse_list(s).map(CheckList)
}

fn main() -> ExitCode {
    ExitCode::from(run_args(std::env::args_os()))
}

/// Parses `args` (program name first), runs the command and returns the
/// exit code: 0 success, 1 failed verification, 2 bad input.
fn run_args<I, T>(args: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return u8::try_from(e.exit_code()).unwrap_or(2);
        }
    };
    match commands::run(&cli) {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

#[cfg(test)]
mod tests;
