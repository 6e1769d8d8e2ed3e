use std::sync::OnceLock;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{is_prime, PrimeError};
use crate::arith::mul_mod_u64;

const TRIAL_BOUND: u64 = 1 << 10;

fn small_primes() -> &'static [u64] {
    static SMALL: OnceLock<Vec<u64>> = OnceLock::new();
    SMALL.get_or_init(|| super::sieve::primes_up_to(TRIAL_BOUND))
}

/// Prime factorization as `(prime, multiplicity)` pairs, ascending by prime.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Factorization {
    factors: Vec<(u64, u32)>,
}

impl Factorization {
    pub fn factors(&self) -> &[(u64, u32)] {
        &self.factors
    }

    /// The distinct prime divisors.
    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.factors.iter().map(|&(q, _)| q)
    }

    /// Multiplies the factorization back out.
    pub fn product(&self) -> u128 {
        self.factors
            .iter()
            .map(|&(q, e)| (q as u128).pow(e))
            .product()
    }

    fn from_unsorted(mut primes: Vec<u64>) -> Self {
        primes.sort_unstable();
        let mut factors: Vec<(u64, u32)> = Vec::new();
        for q in primes {
            match factors.last_mut() {
                Some((last, e)) if *last == q => *e += 1,
                _ => factors.push((q, 1)),
            }
        }
        Factorization { factors }
    }
}

/// Complete factorization of `n >= 2`.
///
/// Trial division strips the small primes; whatever composite cofactor is
/// left is split with Brent's variant of Pollard rho. The rho seed only
/// affects how fast a split is found, never the result.
pub fn factorize(n: u64) -> Result<Factorization, PrimeError> {
    if n < 2 {
        return Err(PrimeError::NothingToFactor(n));
    }
    let mut primes = Vec::new();
    let mut rest = n;
    for &q in small_primes() {
        if q * q > rest {
            break;
        }
        while rest.is_multiple_of(q) {
            primes.push(q);
            rest /= q;
        }
    }
    if rest > 1 {
        split_into(rest, &mut primes);
    }
    Ok(Factorization::from_unsorted(primes))
}

// `n` has no prime factor below TRIAL_BOUND, except possibly n itself.
fn split_into(n: u64, out: &mut Vec<u64>) {
    if n == 1 {
        return;
    }
    if n < TRIAL_BOUND * TRIAL_BOUND || is_prime(n) {
        out.push(n);
        return;
    }
    if let Some(r) = perfect_square_root(n) {
        split_into(r, out);
        split_into(r, out);
        return;
    }
    let mut seed = 0u64;
    let d = loop {
        if let Some(d) = brent_rho(n, seed) {
            break d;
        }
        seed += 1;
    };
    split_into(d, out);
    split_into(n / d, out);
}

fn perfect_square_root(n: u64) -> Option<u64> {
    let r = n.isqrt();
    (r * r == n).then_some(r)
}

/// One attempt of Brent's cycle-finding rho; `None` when the walk collapses.
fn brent_rho(n: u64, seed: u64) -> Option<u64> {
    const BATCH: u64 = 128;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let c = rng.gen_range(1..n);
    let step = |x: u64| (mul_mod_u64(x, x, n) + c) % n;

    let mut y = rng.gen_range(0..n);
    let mut x = y;
    let mut ys = y;
    let mut q = 1u64;
    let mut g = 1u64;
    let mut r = 1u64;
    while g == 1 {
        x = y;
        for _ in 0..r {
            y = step(y);
        }
        let mut k = 0;
        while k < r && g == 1 {
            ys = y;
            for _ in 0..BATCH.min(r - k) {
                y = step(y);
                q = mul_mod_u64(q, x.abs_diff(y), n);
            }
            g = gcd(q, n);
            k += BATCH;
        }
        r *= 2;
    }
    if g == n {
        // the batch overshot; replay it one step at a time
        loop {
            ys = step(ys);
            g = gcd(x.abs_diff(ys), n);
            if g > 1 {
                break;
            }
        }
    }
    (g != n).then_some(g)
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}
