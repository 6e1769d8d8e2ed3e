//! Benchmark harness: runs the halving solver and both oracles on the same
//! inputs and tabulates results, operation counts and wall time.

use std::fmt;
use std::io::{self, Write};
use std::time::Instant;

use rand::seq::index;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::halving::{solve_halving_negation, worst_case_input, SolveError};
use crate::oracles::{
    brute_force_dlog_counted, bsgs_dlog_counted, DlpInstance, OracleError, BSGS_TABLE_BUDGET,
};
use crate::primes::CertifiedPrime;

pub const CSV_HEADER: &str = "p,b,algorithm,result,iterations,elapsed_nanos";

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Algorithm {
    Halving,
    Bsgs,
    Brute,
}

impl Algorithm {
    pub const ALL: [Algorithm; 3] = [Algorithm::Halving, Algorithm::Bsgs, Algorithm::Brute];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Halving => "halving",
            Algorithm::Bsgs => "bsgs",
            Algorithm::Brute => "brute",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// `iterations` counts loop passes for halving and group multiplications for
/// the oracles.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BenchRecord {
    pub p: u64,
    pub b: u64,
    pub algorithm: Algorithm,
    pub result: u64,
    pub iterations: u64,
    pub elapsed_nanos: u128,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BenchMode {
    /// Every `b` in `[1, p - 1]`.
    All,
    /// Only `b = (p - 1) / 2`.
    Worst,
    /// `n` distinct values of `b` per prime drawn from a seeded generator.
    Sample { n: u64, seed: u64 },
}

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("2 is not a primitive root mod {0}")]
    NotCertified(u64),
    #[error("algorithms disagree at p={p}, b={b}: {results:?}")]
    Disagreement {
        p: u64,
        b: u64,
        results: Vec<(Algorithm, u64)>,
    },
    #[error("worst case p={p}: expected log {expected}, got {found}")]
    WorstCase { p: u64, expected: u64, found: u64 },
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

/// Inputs per prime for a given mode, ascending.
pub fn select_inputs(cp: &CertifiedPrime, mode: BenchMode, rng: &mut ChaCha8Rng) -> Vec<u64> {
    let p = cp.p();
    match mode {
        BenchMode::All => (1..p).collect(),
        BenchMode::Worst => vec![(p - 1) / 2],
        BenchMode::Sample { n, .. } => {
            if n >= p - 1 {
                return (1..p).collect();
            }
            let mut picked: Vec<u64> = index::sample(rng, (p - 1) as usize, n as usize)
                .into_iter()
                .map(|i| i as u64 + 1)
                .collect();
            picked.sort_unstable();
            picked
        }
    }
}

pub fn run_bench(
    primes: &[CertifiedPrime],
    mode: BenchMode,
) -> Result<Vec<BenchRecord>, BenchError> {
    let seed = match mode {
        BenchMode::Sample { seed, .. } => seed,
        _ => 0,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut records = Vec::new();
    for cp in primes {
        if !cp.two_is_primitive() {
            return Err(BenchError::NotCertified(cp.p()));
        }
        let worst = match mode {
            // below 5 the identity is trivial (p = 3, b = 1)
            BenchMode::Worst if cp.p() >= 5 => Some(worst_case_input(cp)?),
            _ => None,
        };
        for b in select_inputs(cp, mode, &mut rng) {
            let rows = bench_one(cp, b)?;
            if let Some((_, expected)) = worst {
                let found = rows[0].result;
                if found != expected.value() {
                    return Err(BenchError::WorstCase {
                        p: cp.p(),
                        expected: expected.value(),
                        found,
                    });
                }
            }
            records.extend(rows);
        }
    }
    records.sort_by_key(|r| (r.p, r.b, r.algorithm));
    Ok(records)
}

/// Runs all three algorithms on one input and checks they agree.
pub fn bench_one(cp: &CertifiedPrime, b: u64) -> Result<[BenchRecord; 3], BenchError> {
    let p = cp.p();
    let residue = cp.modulus().unit(b).map_err(SolveError::from)?;

    let t = Instant::now();
    let report = solve_halving_negation(cp, residue, false)?;
    let halving = BenchRecord {
        p,
        b,
        algorithm: Algorithm::Halving,
        result: report.result.value(),
        iterations: report.iterations,
        elapsed_nanos: t.elapsed().as_nanos(),
    };

    let inst = DlpInstance::base_two(cp, residue)?;
    let t = Instant::now();
    let c = bsgs_dlog_counted(&inst, BSGS_TABLE_BUDGET)?;
    let bsgs = BenchRecord {
        p,
        b,
        algorithm: Algorithm::Bsgs,
        result: c.exponent.value(),
        iterations: c.group_ops,
        elapsed_nanos: t.elapsed().as_nanos(),
    };

    let t = Instant::now();
    let c = brute_force_dlog_counted(&inst);
    let brute = BenchRecord {
        p,
        b,
        algorithm: Algorithm::Brute,
        result: c.exponent.value(),
        iterations: c.group_ops,
        elapsed_nanos: t.elapsed().as_nanos(),
    };

    if halving.result != bsgs.result || halving.result != brute.result {
        return Err(BenchError::Disagreement {
            p,
            b,
            results: [&halving, &bsgs, &brute]
                .iter()
                .map(|r| (r.algorithm, r.result))
                .collect(),
        });
    }
    Ok([halving, bsgs, brute])
}

pub fn write_csv<W: Write>(records: &[BenchRecord], mut w: W) -> io::Result<()> {
    w.write_all(CSV_HEADER.as_bytes())?;
    w.write_all(b"\n")?;
    for r in records {
        writeln!(
            w,
            "{},{},{},{},{},{}",
            r.p, r.b, r.algorithm, r.result, r.iterations, r.elapsed_nanos
        )?;
    }
    w.flush()
}
