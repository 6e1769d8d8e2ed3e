//! Command-line front end. Each command renders into a caller-supplied
//! writer so the binary and the tests share one code path.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use thiserror::Error;

use crate::arith::ArithError;
use crate::bench::{run_bench, write_csv, BenchError, BenchMode};
use crate::halving::{solve_halving_negation, SolveReport, StepKind};
use crate::primes::{enumerate_artin2_primes, CertifiedPrime, PrimeError};
use crate::verify::{run_verification, VerifyError, DEFAULT_EXHAUSTIVE_BUDGET, DEFAULT_VERIFY_MAX};

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_BAD_INPUT: i32 = 2;
pub const EXIT_PRECONDITION: i32 = 3;
pub const EXIT_VERIFICATION: i32 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "dlog-lab",
    version,
    about = "Base-2 discrete logarithms by halving and negation"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute log_2(b) mod p.
    Solve {
        p: u64,
        b: u64,
        /// Print every halve/negate step with the running exponent.
        #[arg(long)]
        trace: bool,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// List primes in [lo, hi] for which 2 is a primitive root.
    Primes { lo: u64, hi: u64 },
    /// Exhaustively cross-check the solver on every certified p <= max.
    Verify {
        #[arg(long, default_value_t = DEFAULT_VERIFY_MAX)]
        max: u64,
        #[arg(long, default_value_t = DEFAULT_EXHAUSTIVE_BUDGET)]
        budget: u64,
    },
    /// Time all three algorithms and write CSV records.
    Bench {
        #[arg(long, num_args = 2, value_names = ["LO", "HI"], conflicts_with = "primes")]
        range: Option<Vec<u64>>,
        #[arg(long, value_delimiter = ',')]
        primes: Option<Vec<u64>>,
        #[arg(long, value_enum, default_value_t = Mode::Worst)]
        mode: Mode,
        /// Inputs per prime in sample mode.
        #[arg(long, default_value_t = 10)]
        n: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    #[value(alias = "structured")]
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    All,
    Worst,
    Sample,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    BadInput(String),
    #[error("{0}")]
    Precondition(String),
    #[error("{0}")]
    Verification(String),
    #[error(transparent)]
    Io(#[from] io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::BadInput(_) => EXIT_BAD_INPUT,
            CliError::Precondition(_) => EXIT_PRECONDITION,
            CliError::Verification(_) => EXIT_VERIFICATION,
            CliError::Io(_) => EXIT_IO,
        }
    }
}

impl From<PrimeError> for CliError {
    fn from(e: PrimeError) -> Self {
        match e {
            PrimeError::NotPrime(_) => CliError::Precondition(e.to_string()),
            _ => CliError::BadInput(e.to_string()),
        }
    }
}

impl From<BenchError> for CliError {
    fn from(e: BenchError) -> Self {
        match e {
            BenchError::NotCertified(_) => CliError::Precondition(e.to_string()),
            BenchError::Disagreement { .. } | BenchError::WorstCase { .. } => {
                CliError::Verification(e.to_string())
            }
            _ => CliError::BadInput(e.to_string()),
        }
    }
}

pub fn run<W: Write>(cli: Cli, out: &mut W) -> Result<(), CliError> {
    match cli.command {
        Command::Solve {
            p,
            b,
            trace,
            format,
        } => cmd_solve(p, b, trace, format, out),
        Command::Primes { lo, hi } => cmd_primes(lo, hi, out),
        Command::Verify { max, budget } => cmd_verify(max, budget, out),
        Command::Bench {
            range,
            primes,
            mode,
            n,
            seed,
            out: path,
        } => {
            let mode = match mode {
                Mode::All => BenchMode::All,
                Mode::Worst => BenchMode::Worst,
                Mode::Sample => BenchMode::Sample { n, seed },
            };
            let set = match (range, primes) {
                (Some(r), _) => PrimeSet::Range(r[0], r[1]),
                (None, Some(list)) => PrimeSet::List(list),
                (None, None) => {
                    return Err(CliError::BadInput("bench needs --range or --primes".into()))
                }
            };
            match path {
                Some(path) => {
                    let file = BufWriter::new(File::create(path)?);
                    cmd_bench(set, mode, file)
                }
                None => cmd_bench(set, mode, out),
            }
        }
    }
}

/// Certifies `p` for the halving solver: prime, odd, and 2 primitive.
pub fn certify_for_solve(p: u64) -> Result<CertifiedPrime, CliError> {
    let cp = CertifiedPrime::certify(p)?;
    if !cp.two_is_primitive() {
        return Err(CliError::Precondition(format!(
            "2 is not a primitive root mod {p}"
        )));
    }
    Ok(cp)
}

pub fn cmd_solve<W: Write>(
    p: u64,
    b: u64,
    trace: bool,
    format: Format,
    out: &mut W,
) -> Result<(), CliError> {
    let cp = certify_for_solve(p)?;
    let residue = cp
        .modulus()
        .unit(b)
        .map_err(|e: ArithError| CliError::BadInput(format!("b: {e}")))?;
    let report = solve_halving_negation(&cp, residue, trace)
        .map_err(|e| CliError::Verification(e.to_string()))?;
    match format {
        Format::Text => render_text(&report, out)?,
        Format::Json => {
            serde_json::to_writer_pretty(&mut *out, &report.to_document())
                .map_err(io::Error::from)?;
            writeln!(out)?;
        }
    }
    Ok(())
}

/// Prints the step chain the way one would work it by hand:
/// `3 = -34`, `34 = 2^1 * 17`, ... with the running exponent.
pub fn render_text<W: Write>(report: &SolveReport, out: &mut W) -> io::Result<()> {
    let p = report.prime.p();
    let b = report.b.value();
    if let Some(trace) = &report.trace {
        writeln!(out, "F_{p}^*, b = {b}")?;
        writeln!(
            out,
            "{:>4}  {:<8}  {:<24}  {:>6}",
            "step", "op", "value", "out"
        )?;
        for (i, s) in trace.iter().enumerate() {
            let (op, value) = match s.kind {
                StepKind::Negate => (
                    "negate".to_string(),
                    format!("{} = -{}", s.b_before, s.b_after),
                ),
                StepKind::Halve { k } => (
                    format!("halve {k}"),
                    format!("{} = 2^{k} * {}", s.b_before, s.b_after),
                ),
            };
            writeln!(
                out,
                "{:>4}  {:<8}  {:<24}  {:>6}",
                i + 1,
                op,
                value,
                s.out_after
            )?;
        }
        writeln!(out, "iterations: {}", report.iterations)?;
    }
    writeln!(out, "log_2({b}) = {}", report.result)
}

pub fn cmd_primes<W: Write>(lo: u64, hi: u64, out: &mut W) -> Result<(), CliError> {
    if lo > hi {
        return Err(CliError::BadInput(format!("empty range [{lo}, {hi}]")));
    }
    for cp in enumerate_artin2_primes(lo, hi)? {
        writeln!(out, "{}\t{}\tcertified", cp.p(), cp.p() % 8)?;
    }
    Ok(())
}

pub fn cmd_verify<W: Write>(p_max: u64, budget: u64, out: &mut W) -> Result<(), CliError> {
    let summary = run_verification(p_max, budget).map_err(|e| match e {
        VerifyError::Prime(e) => CliError::from(e),
        e => CliError::BadInput(e.to_string()),
    })?;
    writeln!(out, "{summary}")?;
    match summary.failure_count() {
        0 => Ok(()),
        n => Err(CliError::Verification(format!("{n} verification failures"))),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PrimeSet {
    Range(u64, u64),
    List(Vec<u64>),
}

pub fn cmd_bench<W: Write>(set: PrimeSet, mode: BenchMode, out: W) -> Result<(), CliError> {
    let primes = match set {
        PrimeSet::Range(lo, hi) => {
            if lo > hi {
                return Err(CliError::BadInput(format!("empty range [{lo}, {hi}]")));
            }
            enumerate_artin2_primes(lo, hi)?
        }
        PrimeSet::List(list) => {
            let mut certified = Vec::with_capacity(list.len());
            for p in list {
                certified.push(certify_for_solve(p)?);
            }
            certified.sort_by_key(CertifiedPrime::p);
            certified.dedup_by_key(|cp| cp.p());
            certified
        }
    };
    let records = run_bench(&primes, mode)?;
    write_csv(&records, out)?;
    Ok(())
}
