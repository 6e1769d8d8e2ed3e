//! Exhaustive cross-validation of the halving solver over every certified
//! prime up to a bound: oracle agreement, trace validity, the negation lemma,
//! the iteration bound, and (for small primes) the descent claim.

use std::fmt;

use thiserror::Error;

use crate::arith::pow_mod_u64;
use crate::halving::{descent_violations, solve_halving_negation, validate_trace, StepKind};
use crate::oracles::{brute_force_dlog, DlpInstance};
use crate::primes::{enumerate_artin2_primes, CertifiedPrime, PrimeError};

pub const DEFAULT_VERIFY_MAX: u64 = 2000;
pub const DEFAULT_EXHAUSTIVE_BUDGET: u64 = 2000;
/// Descent is checked against a full table of logs, only up to here.
pub const DESCENT_MAX: u64 = 101;

/// `(kind, b_before, b_after, out_after)` for `log_2 3` mod 37.
pub const GOLDEN_F37: [(StepKind, u64, u64, u64); 6] = [
    (StepKind::Negate, 3, 34, 18),
    (StepKind::Halve { k: 1 }, 34, 17, 19),
    (StepKind::Negate, 17, 20, 1),
    (StepKind::Halve { k: 2 }, 20, 5, 3),
    (StepKind::Negate, 5, 32, 21),
    (StepKind::Halve { k: 5 }, 32, 1, 26),
];

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error("--max {p_max} exceeds the exhaustive budget of {budget}")]
    OverBudget { p_max: u64, budget: u64 },
    #[error("--max must be at least 3")]
    TooSmall,
    #[error(transparent)]
    Prime(#[from] PrimeError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Check {
    OracleAgreement,
    TraceValid,
    NegationLemma,
    IterationBound,
    Descent,
    Golden,
}

impl Check {
    pub const ALL: [Check; 6] = [
        Check::OracleAgreement,
        Check::TraceValid,
        Check::NegationLemma,
        Check::IterationBound,
        Check::Descent,
        Check::Golden,
    ];

    fn label(self) -> &'static str {
        match self {
            Check::OracleAgreement => "halving = brute force, 2^n = b",
            Check::TraceValid => "trace replays b -> 1",
            Check::NegationLemma => "log(a) - log(p - a) = (p - 1)/2",
            Check::IterationBound => "passes <= 2 * log(b) + 1",
            Check::Descent => "negate/halve descent k < log(b)",
            Check::Golden => "golden F_37 trace for log_2(3)",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Failure {
    pub check: Check,
    pub p: u64,
    pub b: u64,
    pub detail: String,
}

#[derive(Debug, Clone, Default)]
pub struct VerifySummary {
    pub p_max: u64,
    pub primes: Vec<u64>,
    pub instances: u64,
    tallies: [(u64, u64); 6],
    pub failures: Vec<Failure>,
}

impl VerifySummary {
    fn record(&mut self, check: Check, ok: bool, p: u64, b: u64, detail: impl FnOnce() -> String) {
        let slot = &mut self.tallies[check as usize];
        if ok {
            slot.0 += 1;
        } else {
            slot.1 += 1;
            self.failures.push(Failure {
                check,
                p,
                b,
                detail: detail(),
            });
        }
    }

    /// `(passed, failed)` for one check.
    pub fn tally(&self, check: Check) -> (u64, u64) {
        self.tallies[check as usize]
    }

    pub fn failure_count(&self) -> usize {
        self.failures.len()
    }
}

impl fmt::Display for VerifySummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "certified primes <= {}: {}",
            self.p_max,
            self.primes.len()
        )?;
        let list: Vec<String> = self.primes.iter().map(u64::to_string).collect();
        writeln!(f, "  {}", list.join(","))?;
        writeln!(f, "instances: {}", self.instances)?;
        for check in Check::ALL {
            let (ok, bad) = self.tally(check);
            if ok + bad == 0 {
                writeln!(f, "  {:<34} skipped", check.label())?;
            } else {
                writeln!(f, "  {:<34} {ok} ok, {bad} failed", check.label())?;
            }
        }
        for fail in self.failures.iter().take(20) {
            writeln!(
                f,
                "  FAIL {} p={} b={}: {}",
                check_name(fail.check),
                fail.p,
                fail.b,
                fail.detail
            )?;
        }
        write!(f, "{} failures", self.failures.len())
    }
}

fn check_name(c: Check) -> &'static str {
    match c {
        Check::OracleAgreement => "oracle",
        Check::TraceValid => "trace",
        Check::NegationLemma => "lemma",
        Check::IterationBound => "bound",
        Check::Descent => "descent",
        Check::Golden => "golden",
    }
}

pub fn run_verification(p_max: u64, budget: u64) -> Result<VerifySummary, VerifyError> {
    if p_max > budget {
        return Err(VerifyError::OverBudget { p_max, budget });
    }
    if p_max < 3 {
        return Err(VerifyError::TooSmall);
    }
    let primes = enumerate_artin2_primes(3, p_max)?;
    let mut summary = VerifySummary {
        p_max,
        primes: primes.iter().map(CertifiedPrime::p).collect(),
        ..Default::default()
    };
    for cp in &primes {
        verify_prime(cp, &mut summary);
    }
    if p_max >= 37 {
        check_golden(&mut summary);
    }
    Ok(summary)
}

fn verify_prime(cp: &CertifiedPrime, summary: &mut VerifySummary) {
    let p = cp.p();
    let m = cp.modulus();
    let descent_table = (p <= DESCENT_MAX).then(|| log_table(p));
    let mut logs = vec![0u64; p as usize];

    for b in 1..p {
        summary.instances += 1;
        let residue = m.residue(b);
        let report = match solve_halving_negation(cp, residue, true) {
            Ok(r) => r,
            Err(e) => {
                summary.record(Check::OracleAgreement, false, p, b, || e.to_string());
                continue;
            }
        };
        let n = report.result.value();
        logs[b as usize] = n;

        let brute = DlpInstance::base_two(cp, residue)
            .map(|inst| brute_force_dlog(&inst).value())
            .ok();
        let agrees = brute == Some(n) && pow_mod_u64(2, n, p) == b;
        summary.record(Check::OracleAgreement, agrees, p, b, || {
            format!("halving {n}, brute force {brute:?}")
        });

        let violations = validate_trace(&report);
        summary.record(Check::TraceValid, violations.is_empty(), p, b, || {
            format!("{violations:?}")
        });

        let bound = 2 * n + 1;
        summary.record(
            Check::IterationBound,
            report.iterations <= bound,
            p,
            b,
            || format!("{} passes > {bound}", report.iterations),
        );

        if let Some(table) = &descent_table {
            let bad = descent_violations(&report, |x| table[x as usize]);
            summary.record(Check::Descent, bad.is_empty(), p, b, || {
                format!("at steps {bad:?}")
            });
        }
    }

    let half = m.half_order();
    for a in 1..p {
        let diff = (logs[a as usize] + (p - 1) - logs[(p - a) as usize]) % (p - 1);
        summary.record(Check::NegationLemma, diff == half, p, a, || {
            format!("difference {diff}, expected {half}")
        });
    }
}

/// `table[x] = log_2 x` by walking powers of 2.
fn log_table(p: u64) -> Vec<u64> {
    let mut table = vec![0u64; p as usize];
    let mut x = 1u64;
    for e in 0..p - 1 {
        table[x as usize] = e;
        x = x * 2 % p;
    }
    table
}

fn check_golden(summary: &mut VerifySummary) {
    let outcome = CertifiedPrime::certify(37)
        .ok()
        .and_then(|cp| solve_halving_negation(&cp, cp.modulus().residue(3), true).ok());
    let ok = outcome.as_ref().is_some_and(|r| {
        let steps: Vec<_> = r
            .trace
            .iter()
            .flatten()
            .map(|s| (s.kind, s.b_before, s.b_after, s.out_after))
            .collect();
        r.result.value() == 26 && steps == GOLDEN_F37
    });
    summary.record(Check::Golden, ok, 37, 3, || {
        "trace differs from golden".into()
    });
}
