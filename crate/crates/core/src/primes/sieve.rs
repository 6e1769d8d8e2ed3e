use super::{is_prime, PrimeError};

const SEGMENT_LEN: u64 = 1 << 18;
/// Sieving primes stop here; beyond it survivors are confirmed by [`is_prime`].
const BASE_LIMIT: u64 = 1 << 21;

/// Caps the width of a range the sieve will walk.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SieveBudget {
    pub max_span: u64,
}

impl Default for SieveBudget {
    fn default() -> Self {
        SieveBudget { max_span: 1 << 34 }
    }
}

/// Plain sieve of Eratosthenes over `[2, limit]`.
pub(crate) fn primes_up_to(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let n = limit as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if composite[i] {
            continue;
        }
        out.push(i as u64);
        let mut j = i * i;
        while j <= n {
            composite[j] = true;
            j += i;
        }
    }
    out
}

/// All primes in `[lo, hi]`, ascending, via a segmented sieve.
///
/// Memory stays bounded by one segment plus the sieving primes regardless of
/// where the range sits below 2^64.
pub fn primes_in_range(lo: u64, hi: u64, budget: SieveBudget) -> Result<Vec<u64>, PrimeError> {
    if lo > hi {
        return Err(PrimeError::EmptyRange { lo, hi });
    }
    if hi - lo >= budget.max_span {
        return Err(PrimeError::RangeTooLarge {
            span: hi - lo + 1,
            max_span: budget.max_span,
        });
    }
    let lo = lo.max(2);
    if lo > hi {
        return Ok(Vec::new());
    }
    let base_limit = hi.isqrt().min(BASE_LIMIT);
    let base = primes_up_to(base_limit);
    // survivors above this need a real primality test
    let exact_below = (base_limit + 1).saturating_mul(base_limit + 1);

    let mut out = Vec::new();
    let mut marks = vec![false; SEGMENT_LEN as usize];
    let mut start = lo;
    loop {
        let end = hi.min(start.saturating_add(SEGMENT_LEN - 1));
        let len = (end - start + 1) as usize;
        marks[..len].fill(true);
        for &q in &base {
            let first = (q * q).max(start.div_ceil(q) * q);
            if first > end {
                continue;
            }
            let mut j = first - start;
            while j < len as u64 {
                marks[j as usize] = false;
                j += q;
            }
        }
        for (i, &alive) in marks[..len].iter().enumerate() {
            let n = start + i as u64;
            if alive && (n < exact_below || is_prime(n)) {
                out.push(n);
            }
        }
        if end == hi {
            break;
        }
        start = end + 1;
    }
    Ok(out)
}
