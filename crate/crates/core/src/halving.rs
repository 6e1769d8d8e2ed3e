//! Base-2 discrete logarithms by alternating halving and negation.
//!
//! While `b != 1`: if `b` is even, strip its largest power of two `2^k` and
//! add `k` to the running exponent; if `b` is odd, replace it by `p - b` and
//! add `(p - 1) / 2`, the logarithm of `-1`. Both additions are taken modulo
//! `p - 1`. The loop terminates whenever 2 generates `F_p^*`, after a number
//! of passes that grows linearly with `p`, so this is a laboratory algorithm
//! and not a practical one.

use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{pow_mod_u64, ArithError, Exponent, Modulus, Residue};
use crate::primes::CertifiedPrime;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error("0 is not an element of F_{0}^*")]
    ZeroElement(u64),
    #[error("2 is not a primitive root mod {0}; the halving loop need not terminate")]
    NotPrimitive(u64),
    #[error("no convergence after {limit} loop passes mod {p}")]
    IterationGuard { p: u64, limit: u64 },
    #[error("deadline reached after {passes} loop passes mod {p}")]
    DeadlineExceeded { p: u64, passes: u64 },
    #[error("p = {p} is below the minimum {min} for this input")]
    PrimeTooSmall { p: u64, min: u64 },
    #[error(transparent)]
    Arith(#[from] ArithError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StepKind {
    /// Division by `2^k`, `k >= 1` maximal.
    Halve { k: u32 },
    /// `b -> p - b` for odd `b != 1`.
    Negate,
}

/// One loop pass. Values are residues mod the report's prime.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TraceStep {
    pub kind: StepKind,
    pub b_before: u64,
    pub b_after: u64,
    pub out_after: u64,
}

#[derive(Debug, Clone)]
pub struct SolveReport {
    pub prime: CertifiedPrime,
    pub b: Residue,
    pub result: Exponent,
    /// `None` when the solve ran without recording.
    pub trace: Option<Vec<TraceStep>>,
    pub iterations: u64,
    pub elapsed: Duration,
}

impl SolveReport {
    /// `2^result == b`.
    pub fn self_verifies(&self) -> bool {
        let p = self.prime.p();
        pow_mod_u64(2, self.result.value(), p) == self.b.value()
    }

    pub fn to_document(&self) -> SolveDocument {
        SolveDocument {
            p: self.prime.p(),
            b: self.b.value(),
            result: self.result.value(),
            iterations: self.iterations,
            steps: self
                .trace
                .iter()
                .flatten()
                .map(|s| StepDocument {
                    kind: match s.kind {
                        StepKind::Halve { .. } => "halve".into(),
                        StepKind::Negate => "negate".into(),
                    },
                    k: match s.kind {
                        StepKind::Halve { k } => Some(k),
                        StepKind::Negate => None,
                    },
                    b_before: s.b_before,
                    b_after: s.b_after,
                    out_after: s.out_after,
                })
                .collect(),
        }
    }
}

/// Stable serialized form of a [`SolveReport`]. Timing is deliberately absent.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolveDocument {
    pub p: u64,
    pub b: u64,
    pub result: u64,
    pub iterations: u64,
    pub steps: Vec<StepDocument>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepDocument {
    pub kind: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub k: Option<u32>,
    pub b_before: u64,
    pub b_after: u64,
    pub out_after: u64,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct SolveOptions {
    pub record_trace: bool,
    /// Checked every few thousand passes; `None` runs to completion.
    pub deadline: Option<Instant>,
}

impl SolveOptions {
    pub fn traced() -> Self {
        SolveOptions {
            record_trace: true,
            deadline: None,
        }
    }
}

/// Loop passes allowed before the solver gives up: `2(p - 1) + 2`.
pub fn iteration_guard(p: u64) -> u64 {
    2 * (p - 1) + 2
}

/// Computes `log_2 b` in `F_p^*` for a prime on which 2 is certified primitive.
pub fn solve_halving_negation(
    cp: &CertifiedPrime,
    b: Residue,
    record_trace: bool,
) -> Result<SolveReport, SolveError> {
    solve_with_options(
        cp,
        b,
        SolveOptions {
            record_trace,
            deadline: None,
        },
    )
}

pub fn solve_with_options(
    cp: &CertifiedPrime,
    b: Residue,
    options: SolveOptions,
) -> Result<SolveReport, SolveError> {
    if !cp.two_is_primitive() {
        return Err(SolveError::NotPrimitive(cp.p()));
    }
    if b.modulus() != cp.modulus() {
        return Err(ArithError::ModulusMismatch(b.modulus().get(), cp.p()).into());
    }
    let start = Instant::now();
    let run = run_loop(cp.modulus(), b, options)?;
    Ok(SolveReport {
        prime: cp.clone(),
        b,
        result: run.result,
        trace: run.trace,
        iterations: run.iterations,
        elapsed: start.elapsed(),
    })
}

pub struct LoopRun {
    pub result: Exponent,
    pub trace: Option<Vec<TraceStep>>,
    pub iterations: u64,
}

/// The bare loop, with no check that 2 is primitive mod `modulus`.
///
/// On a modulus where 2 has smaller order the loop may return a wrong
/// exponent or cycle until the iteration guard trips.
pub fn run_loop(
    modulus: Modulus,
    b: Residue,
    options: SolveOptions,
) -> Result<LoopRun, SolveError> {
    const DEADLINE_STRIDE: u64 = 1 << 16;

    let p = modulus.get();
    if b.is_zero() {
        return Err(SolveError::ZeroElement(p));
    }
    let order = modulus.group_order();
    let half = modulus.half_order();
    let guard = iteration_guard(p);

    let mut cur = b.value();
    let mut out = 0u64;
    let mut passes = 0u64;
    let mut trace = options.record_trace.then(Vec::new);

    while cur != 1 {
        if passes == guard {
            return Err(SolveError::IterationGuard { p, limit: guard });
        }
        if let Some(deadline) = options.deadline {
            if passes.is_multiple_of(DEADLINE_STRIDE) && passes > 0 && Instant::now() >= deadline {
                return Err(SolveError::DeadlineExceeded { p, passes });
            }
        }
        let before = cur;
        let k = cur.trailing_zeros();
        let kind = if k == 0 {
            cur = p - cur;
            out = add_mod(out, half, order);
            StepKind::Negate
        } else {
            cur >>= k;
            out = add_mod(out, k as u64, order);
            StepKind::Halve { k }
        };
        passes += 1;
        if let Some(t) = trace.as_mut() {
            t.push(TraceStep {
                kind,
                b_before: before,
                b_after: cur,
                out_after: out,
            });
        }
    }

    Ok(LoopRun {
        result: Exponent::new(out, order),
        trace,
        iterations: passes,
    })
}

#[inline]
fn add_mod(a: u64, b: u64, m: u64) -> u64 {
    // a, b < m < 2^62
    let s = a + b;
    if s >= m {
        s - m
    } else {
        s
    }
}

/// `log(-1) = (p - 1) / 2` for any generator, without running the loop.
pub fn log_minus_one(cp: &CertifiedPrime) -> Exponent {
    cp.modulus().exponent(cp.modulus().half_order())
}

/// `b = (p - 1) / 2`, whose logarithm is `(p - 3) / 2`; the slowest input
/// observed for the halving loop.
pub fn worst_case_input(cp: &CertifiedPrime) -> Result<(Residue, Exponent), SolveError> {
    let p = cp.p();
    if p < 5 {
        return Err(SolveError::PrimeTooSmall { p, min: 5 });
    }
    let m = cp.modulus();
    Ok((m.residue((p - 1) / 2), m.exponent((p - 3) / 2)))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ViolationKind {
    MissingTrace,
    /// `b_before` differs from the previous step's `b_after` (or from `b`).
    BrokenChain {
        expected: u64,
        found: u64,
    },
    HalveOfOdd,
    /// `k` is not the full power of two dividing `b_before`.
    WrongValuation {
        expected: u32,
        found: u32,
    },
    HalveResult {
        expected: u64,
        found: u64,
    },
    NegateOfEven,
    NegateOfOne,
    NegateResult {
        expected: u64,
        found: u64,
    },
    /// Fact 1: the negation of an odd residue must be even.
    NegateNotEven,
    RunningExponent {
        expected: u64,
        found: u64,
    },
    ConsecutiveNegates,
    DoesNotReachOne {
        last: u64,
    },
    FinalExponent {
        expected: u64,
        found: u64,
    },
    IterationCount {
        expected: u64,
        found: u64,
    },
    SelfCheck {
        two_to_result: u64,
        b: u64,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    /// Index into the trace, `None` for whole-report checks.
    pub step: Option<usize>,
    pub kind: ViolationKind,
}

/// Replays a recorded trace and lists every inconsistency. An empty list
/// means the trace is a faithful run of the loop from `b` to 1 ending at
/// `result`, and `2^result == b`.
pub fn validate_trace(report: &SolveReport) -> Vec<Violation> {
    use ViolationKind as V;

    let mut found = Vec::new();
    let mut flag = |step: Option<usize>, kind| found.push(Violation { step, kind });

    let p = report.prime.p();
    let order = p - 1;
    let half = order / 2;

    let Some(trace) = report.trace.as_ref() else {
        flag(None, V::MissingTrace);
        return found;
    };

    let mut cur = report.b.value();
    let mut out = 0u64;
    let mut prev_negate = false;
    for (i, step) in trace.iter().enumerate() {
        let at = Some(i);
        if step.b_before != cur {
            flag(
                at,
                V::BrokenChain {
                    expected: cur,
                    found: step.b_before,
                },
            );
        }
        let b = step.b_before;
        let expected_out;
        match step.kind {
            StepKind::Halve { k } => {
                if b % 2 == 1 {
                    flag(at, V::HalveOfOdd);
                }
                let full = if b == 0 { 0 } else { b.trailing_zeros() };
                if k != full {
                    flag(
                        at,
                        V::WrongValuation {
                            expected: full,
                            found: k,
                        },
                    );
                }
                let shifted = if k < 64 { b >> k } else { 0 };
                if step.b_after != shifted || shifted << k.min(63) != b || shifted % 2 == 0 {
                    flag(
                        at,
                        V::HalveResult {
                            expected: b >> full.min(63),
                            found: step.b_after,
                        },
                    );
                }
                expected_out = (out + k as u64 % order) % order;
                prev_negate = false;
            }
            StepKind::Negate => {
                if b % 2 == 0 {
                    flag(at, V::NegateOfEven);
                }
                if b == 1 {
                    flag(at, V::NegateOfOne);
                }
                let neg = p.wrapping_sub(b);
                if step.b_after != neg {
                    flag(
                        at,
                        V::NegateResult {
                            expected: neg,
                            found: step.b_after,
                        },
                    );
                }
                if step.b_after % 2 != 0 {
                    flag(at, V::NegateNotEven);
                }
                if prev_negate {
                    flag(at, V::ConsecutiveNegates);
                }
                expected_out = (out + half) % order;
                prev_negate = true;
            }
        }
        if step.out_after != expected_out {
            flag(
                at,
                V::RunningExponent {
                    expected: expected_out,
                    found: step.out_after,
                },
            );
        }
        cur = step.b_after;
        // keep the recomputed total so one bad entry is reported once
        out = expected_out;
    }

    if cur != 1 {
        flag(None, V::DoesNotReachOne { last: cur });
    }
    if out != report.result.value() {
        flag(
            None,
            V::FinalExponent {
                expected: out,
                found: report.result.value(),
            },
        );
    }
    if report.iterations != trace.len() as u64 {
        flag(
            None,
            V::IterationCount {
                expected: trace.len() as u64,
                found: report.iterations,
            },
        );
    }
    let two_to_result = pow_mod_u64(2, report.result.value(), p);
    if two_to_result != report.b.value() {
        flag(
            None,
            V::SelfCheck {
                two_to_result,
                b: report.b.value(),
            },
        );
    }
    found
}

/// Steps where a `Negate` followed by `Halve(k)` fails `k < log_2(b)`, with
/// `b` the value before the negation. `log2` must be an independent oracle.
pub fn descent_violations(report: &SolveReport, log2: impl Fn(u64) -> u64) -> Vec<usize> {
    let Some(trace) = report.trace.as_ref() else {
        return Vec::new();
    };
    trace
        .windows(2)
        .enumerate()
        .filter_map(|(i, pair)| match (pair[0].kind, pair[1].kind) {
            (StepKind::Negate, StepKind::Halve { k }) if k as u64 >= log2(pair[0].b_before) => {
                Some(i + 1)
            }
            _ => None,
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cp(p: u64) -> CertifiedPrime {
        CertifiedPrime::certify(p).unwrap()
    }

    fn solve(p: u64, b: u64) -> SolveReport {
        let cp = cp(p);
        let b = cp.modulus().unit(b).unwrap();
        solve_halving_negation(&cp, b, true).unwrap()
    }

    #[test]
    fn golden_f37_trace() {
        let r = solve(37, 3);
        assert_eq!(r.result.value(), 26);
        let steps: Vec<(StepKind, u64, u64, u64)> = r
            .trace
            .as_ref()
            .unwrap()
            .iter()
            .map(|s| (s.kind, s.b_before, s.b_after, s.out_after))
            .collect();
        use StepKind::*;
        assert_eq!(
            steps,
            vec![
                (Negate, 3, 34, 18),
                (Halve { k: 1 }, 34, 17, 19),
                (Negate, 17, 20, 1),
                (Halve { k: 2 }, 20, 5, 3),
                (Negate, 5, 32, 21),
                (Halve { k: 5 }, 32, 1, 26),
            ]
        );
        assert_eq!(r.iterations, 6);
        assert!(validate_trace(&r).is_empty());
    }

    #[test]
    fn solve_examples() {
        let one = solve(37, 1);
        assert_eq!(one.result.value(), 0);
        assert!(one.trace.as_ref().unwrap().is_empty());
        assert_eq!(one.iterations, 0);

        // p - 1 is even, so this starts with a halve rather than a negate
        assert_eq!(solve(37, 36).result.value(), 18);
        assert_eq!(solve(11, 10).result.value(), 5);
        assert_eq!(solve(11, 3).result.value(), 8);
        assert_eq!(solve(37, 18).result.value(), 17);
        assert_eq!(solve(11, 7).result.value(), 7);
    }

    #[test]
    fn rejects_zero_and_uncertified() {
        let c = cp(37);
        assert_eq!(
            solve_halving_negation(&c, c.modulus().residue(0), false).unwrap_err(),
            SolveError::ZeroElement(37)
        );
        let c7 = cp(7);
        assert_eq!(
            solve_halving_negation(&c7, c7.modulus().residue(3), false).unwrap_err(),
            SolveError::NotPrimitive(7)
        );
        assert!(matches!(
            solve_halving_negation(&c, cp(11).modulus().residue(3), false),
            Err(SolveError::Arith(ArithError::ModulusMismatch(11, 37)))
        ));
    }

    #[test]
    fn guard_trips_when_two_is_not_primitive() {
        // 2 has order 8 mod 17; 3 -> 14 -> 7 -> 10 -> 5 -> 12 -> 3 cycles.
        let m = Modulus::new(17).unwrap();
        let err = run_loop(m, m.residue(3), SolveOptions::default())
            .err()
            .unwrap();
        assert_eq!(err, SolveError::IterationGuard { p: 17, limit: 34 });
    }

    #[test]
    fn loop_without_certification_can_be_wrong() {
        // 2 has order 3 mod 7: the loop stops but its answer fails 2^n = b.
        let m = Modulus::new(7).unwrap();
        let run = run_loop(m, m.residue(3), SolveOptions::default()).unwrap();
        assert_ne!(pow_mod_u64(2, run.result.value(), 7), 3);
    }

    #[test]
    fn deadline_in_the_past_stops_a_long_solve() {
        let c = enumerate_first_above(1 << 30);
        let b = c.modulus().residue((c.p() - 1) / 2);
        let opts = SolveOptions {
            record_trace: false,
            deadline: Some(Instant::now()),
        };
        assert!(matches!(
            solve_with_options(&c, b, opts),
            Err(SolveError::DeadlineExceeded { .. })
        ));
    }

    fn enumerate_first_above(lo: u64) -> CertifiedPrime {
        crate::primes::enumerate_artin2_primes(lo, lo + 10_000)
            .unwrap()
            .into_iter()
            .next()
            .unwrap()
    }

    #[test]
    fn log_minus_one_examples() {
        assert_eq!(log_minus_one(&cp(37)).value(), 18);
        assert_eq!(log_minus_one(&cp(3)).value(), 1);
        assert_eq!(log_minus_one(&cp(11)).value(), 5);
    }

    #[test]
    fn worst_case_examples() {
        let wc = |p| {
            let (b, e) = worst_case_input(&cp(p)).unwrap();
            (b.value(), e.value())
        };
        assert_eq!(wc(37), (18, 17));
        assert_eq!(wc(5), (2, 1));
        assert_eq!(wc(11), (5, 4));
        assert!(worst_case_input(&cp(3)).is_err());
    }

    #[test]
    fn perturbed_exponent_is_reported_at_its_step() {
        let mut r = solve(37, 3);
        r.trace.as_mut().unwrap()[2].out_after += 1;
        assert_eq!(
            validate_trace(&r),
            vec![Violation {
                step: Some(2),
                kind: ViolationKind::RunningExponent {
                    expected: 1,
                    found: 2
                }
            }]
        );
    }

    #[test]
    fn validator_catches_structural_damage() {
        let mut r = solve(37, 3);
        r.trace.as_mut().unwrap().swap(0, 1);
        assert!(!validate_trace(&r).is_empty());

        let mut r = solve(37, 3);
        r.trace = None;
        assert_eq!(validate_trace(&r)[0].kind, ViolationKind::MissingTrace);

        let mut r = solve(37, 3);
        r.trace.as_mut().unwrap().pop();
        r.iterations = 5;
        let kinds: Vec<_> = validate_trace(&r).into_iter().map(|v| v.kind).collect();
        assert!(kinds.contains(&ViolationKind::DoesNotReachOne { last: 32 }));

        let mut r = solve(37, 3);
        r.result = Exponent::new(25, 36);
        assert!(!validate_trace(&r).is_empty());
    }

    #[test]
    fn every_trace_mod_11_is_valid() {
        for b in 1..11 {
            let r = solve(11, b);
            assert_eq!(validate_trace(&r), vec![], "b={b}");
        }
    }

    #[test]
    fn document_field_names_are_stable() {
        let doc = solve(37, 3).to_document();
        let json = serde_json::to_value(&doc).unwrap();
        assert_eq!(json["p"], 37);
        assert_eq!(json["b"], 3);
        assert_eq!(json["result"], 26);
        assert_eq!(json["iterations"], 6);
        let first = &json["steps"][0];
        assert_eq!(first["kind"], "negate");
        assert!(first.get("k").is_none());
        assert_eq!(json["steps"][1]["kind"], "halve");
        assert_eq!(json["steps"][1]["k"], 1);
        assert_eq!(json["steps"][5]["out_after"], 26);
        let back: SolveDocument = serde_json::from_value(json).unwrap();
        assert_eq!(back, doc);
    }
}
