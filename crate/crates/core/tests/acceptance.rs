//! Acceptance criteria. Each test prints one PASS/FAIL line with its
//! measurements; run with `--nocapture` to see them on success.

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use dlog_lab::arith::pow_mod_u64;
use dlog_lab::cli::{cmd_solve, Format};
use dlog_lab::halving::{
    descent_violations, solve_halving_negation, solve_with_options, validate_trace, SolveOptions,
    StepKind,
};
use dlog_lab::oracles::{
    brute_force_dlog, bsgs_dlog, generator_independence_check, lemma_negation_check, BsgsTable,
    DlpInstance, BSGS_TABLE_BUDGET,
};
use dlog_lab::primes::{enumerate_artin2_primes, primes_in_range, CertifiedPrime, SieveBudget};

fn report(id: u32, name: &str, ok: bool, elapsed: Duration, limit: Duration, detail: &str) {
    let verdict = if ok && elapsed < limit {
        "PASS"
    } else {
        "FAIL"
    };
    println!("criterion {id} [{verdict}] {name}: {detail} ({elapsed:.3?} of {limit:?})");
    assert!(ok, "criterion {id} ({name}) failed: {detail}");
    assert!(
        elapsed < limit,
        "criterion {id} ({name}) took {elapsed:?}, limit {limit:?}"
    );
}

fn odd_primes_below(n: u64) -> Vec<CertifiedPrime> {
    primes_in_range(3, n - 1, SieveBudget::default())
        .unwrap()
        .into_iter()
        .map(|p| CertifiedPrime::certify(p).unwrap())
        .collect()
}

#[test]
fn criterion_1_golden_example() {
    use StepKind::*;
    // best of five, so a scheduler hiccup on a busy machine is not counted
    let mut text = Vec::new();
    let elapsed = (0..5)
        .map(|_| {
            text.clear();
            let start = Instant::now();
            cmd_solve(37, 3, true, Format::Text, &mut text).unwrap();
            start.elapsed()
        })
        .min()
        .unwrap();

    let cp = CertifiedPrime::certify(37).unwrap();
    let r = solve_halving_negation(&cp, cp.modulus().residue(3), true).unwrap();
    let trace = r.trace.as_ref().unwrap();
    let kinds: Vec<StepKind> = trace.iter().map(|s| s.kind).collect();
    let outs: Vec<u64> = trace.iter().map(|s| s.out_after).collect();
    let text = String::from_utf8(text).unwrap();

    let ok = r.result.value() == 26
        && kinds
            == [
                Negate,
                Halve { k: 1 },
                Negate,
                Halve { k: 2 },
                Negate,
                Halve { k: 5 },
            ]
        && outs == [18, 19, 1, 3, 21, 26]
        && text.lines().last() == Some("log_2(3) = 26")
        && validate_trace(&r).is_empty();
    report(
        1,
        "golden F_37 trace",
        ok,
        elapsed,
        Duration::from_millis(1),
        &format!("log_2(3) = {}, outs {outs:?}", r.result),
    );
}

#[test]
fn criterion_2_worst_case_identity() {
    let start = Instant::now();
    let primes = enumerate_artin2_primes(5, 100_000).unwrap();
    let mut mismatches = 0;
    for cp in &primes {
        let p = cp.p();
        let r = solve_halving_negation(cp, cp.modulus().residue((p - 1) / 2), false).unwrap();
        if r.result.value() != (p - 3) / 2 {
            mismatches += 1;
        }
    }
    report(
        2,
        "log_2((p-1)/2) = (p-3)/2",
        mismatches == 0 && !primes.is_empty(),
        start.elapsed(),
        Duration::from_secs(60),
        &format!("{} certified primes, {mismatches} mismatches", primes.len()),
    );
}

#[test]
fn criterion_3_oracle_equivalence() {
    let start = Instant::now();
    let primes = enumerate_artin2_primes(3, 1999).unwrap();
    let mut instances = 0u64;
    let mut mismatches = 0u64;
    for cp in &primes {
        let p = cp.p();
        for b in 1..p {
            instances += 1;
            let residue = cp.modulus().residue(b);
            let halving = solve_halving_negation(cp, residue, false).unwrap().result;
            let inst = DlpInstance::base_two(cp, residue).unwrap();
            let brute = brute_force_dlog(&inst);
            let bsgs = bsgs_dlog(&inst).unwrap();
            if halving != brute || halving != bsgs || pow_mod_u64(2, halving.value(), p) != b {
                mismatches += 1;
            }
        }
    }
    report(
        3,
        "halving = brute force = BSGS",
        mismatches == 0,
        start.elapsed(),
        Duration::from_secs(300),
        &format!(
            "{} primes, {instances} instances, {mismatches} mismatches",
            primes.len()
        ),
    );
}

#[test]
fn criterion_4_negation_lemma() {
    let start = Instant::now();
    let mut checked = 0u64;
    let mut failures = 0u64;
    for cp in odd_primes_below(500) {
        let m = cp.modulus();
        for g in cp.primitive_roots() {
            for a in 1..cp.p() {
                checked += 1;
                if !lemma_negation_check(&cp, g, m.residue(a)).unwrap() {
                    failures += 1;
                }
            }
        }
    }
    report(
        4,
        "log_g(a) - log_g(p-a) = (p-1)/2",
        failures == 0,
        start.elapsed(),
        Duration::from_secs(120),
        &format!("{checked} (p, g, a) triples, {failures} failures"),
    );
}

#[test]
fn criterion_5_generator_independence() {
    let start = Instant::now();
    let primes = odd_primes_below(10_000);
    let failing: Vec<u64> = primes
        .iter()
        .filter(|cp| !generator_independence_check(cp))
        .map(CertifiedPrime::p)
        .collect();
    report(
        5,
        "log_g(-1) independent of g",
        failing.is_empty(),
        start.elapsed(),
        Duration::from_secs(120),
        &format!("{} odd primes, failing {failing:?}", primes.len()),
    );
}

#[test]
fn criterion_6_necessary_condition() {
    let start = Instant::now();
    let mut certified = 0u64;
    let mut exceptions = Vec::new();
    // certify every prime directly so the mod-8 prefilter is not assumed
    for cp in odd_primes_below(1_000_000) {
        if cp.two_is_primitive() {
            certified += 1;
            if !matches!(cp.p() % 8, 3 | 5) || !cp.meets_necessary_condition() {
                exceptions.push(cp.p());
            }
        }
    }
    report(
        6,
        "2 primitive implies p = 3, 5 mod 8",
        exceptions.is_empty() && certified > 0,
        start.elapsed(),
        Duration::from_secs(60),
        &format!("{certified} certified primes, exceptions {exceptions:?}"),
    );
}

#[test]
fn criterion_7_iteration_bound() {
    let start = Instant::now();
    let mut solves = 0u64;
    let mut exceptions = 0u64;
    for cp in enumerate_artin2_primes(3, 1999).unwrap() {
        for b in 1..cp.p() {
            let r = solve_halving_negation(&cp, cp.modulus().residue(b), false).unwrap();
            solves += 1;
            if r.iterations > 2 * r.result.value() + 1 {
                exceptions += 1;
            }
        }
    }
    report(
        7,
        "passes <= 2 * result + 1",
        exceptions == 0,
        start.elapsed(),
        Duration::from_secs(300),
        &format!("{solves} solves, {exceptions} exceptions"),
    );
}

#[test]
fn criterion_8_descent_claim() {
    let start = Instant::now();
    let mut pairs = 0u64;
    let mut exceptions = 0u64;
    for cp in enumerate_artin2_primes(3, 101).unwrap() {
        let m = cp.modulus();
        let two = m.residue(2);
        let log = |x: u64| {
            let inst = DlpInstance::new(&cp, two, m.residue(x)).unwrap();
            brute_force_dlog(&inst).value()
        };
        for b in 1..cp.p() {
            let r = solve_halving_negation(&cp, m.residue(b), true).unwrap();
            pairs += r
                .trace
                .as_ref()
                .unwrap()
                .windows(2)
                .filter(|w| w[0].kind == StepKind::Negate)
                .count() as u64;
            exceptions += descent_violations(&r, log).len() as u64;
        }
    }
    report(
        8,
        "negate/halve(k) has k < log of the negated value",
        exceptions == 0 && pairs > 0,
        start.elapsed(),
        Duration::from_secs(60),
        &format!("{pairs} negate/halve pairs, {exceptions} exceptions"),
    );
}

#[test]
fn criterion_9_scale_check_near_2_40() {
    const SAMPLES: usize = 100;
    let limit = Duration::from_secs(30);
    let start = Instant::now();
    let deadline = start + limit;

    let lo = 1u64 << 40;
    let cp = enumerate_artin2_primes(lo, lo + 100_000)
        .unwrap()
        .into_iter()
        .next()
        .expect("a certified prime just above 2^40");
    let p = cp.p();
    let m = cp.modulus();
    let table = BsgsTable::new(&cp, m.residue(2), BSGS_TABLE_BUDGET).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(40);
    let targets: Vec<u64> = (0..SAMPLES).map(|_| rng.gen_range(1..p)).collect();

    let bsgs_logs: Vec<u64> = targets
        .iter()
        .map(|&b| table.solve_counted(b).unwrap().0)
        .collect();
    let bsgs_verified = targets
        .iter()
        .zip(&bsgs_logs)
        .filter(|&(&b, &n)| pow_mod_u64(2, n, p) == b)
        .count();

    // Halving needs about p/4 passes for a uniform b, so the deadline,
    // not the loop, usually ends this.
    let mut agreed = 0;
    let mut halving_passes = 0u64;
    let mut stopped = None;
    for (&b, &n) in targets.iter().zip(&bsgs_logs) {
        let opts = SolveOptions {
            record_trace: false,
            deadline: Some(deadline),
        };
        match solve_with_options(&cp, m.residue(b), opts) {
            Ok(r) => {
                halving_passes += r.iterations;
                if r.result.value() == n && r.self_verifies() {
                    agreed += 1;
                }
            }
            Err(e) => {
                stopped = Some(e.to_string());
                break;
            }
        }
    }
    report(
        9,
        "BSGS and halving agree at p near 2^40",
        agreed == SAMPLES && bsgs_verified == SAMPLES,
        start.elapsed(),
        limit + Duration::from_secs(1),
        &format!(
            "p = {p}; BSGS self-verified {bsgs_verified}/{SAMPLES}; halving agreed \
             {agreed}/{SAMPLES} after {halving_passes} completed passes; {}",
            stopped.unwrap_or_else(|| "halving finished".into())
        ),
    );
}
