//! Primality, factorization of `p - 1`, and certification of primes for
//! which 2 generates the multiplicative group.

mod factor;
mod sieve;

pub use factor::{factorize, Factorization};
pub use sieve::{primes_in_range, SieveBudget};

use thiserror::Error;

use crate::arith::{pow_mod_u64, ArithError, Modulus, Residue};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PrimeError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("cannot factor {0}: need n >= 2")]
    NothingToFactor(u64),
    #[error("empty range [{lo}, {hi}]")]
    EmptyRange { lo: u64, hi: u64 },
    #[error("range of {span} integers exceeds the sieve budget of {max_span}")]
    RangeTooLarge { span: u64, max_span: u64 },
    #[error(transparent)]
    Arith(#[from] ArithError),
}

/// Deterministic Miller-Rabin bases; correct for every n < 3.3 * 10^24.
const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

/// Exact primality test for all 64-bit inputs.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &q in &WITNESSES {
        if n.is_multiple_of(q) {
            return n == q;
        }
    }
    if n < 41 * 41 {
        return true;
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &WITNESSES {
        let mut x = pow_mod_u64(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = crate::arith::mul_mod_u64(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// `p mod 8` is 3 or 5, i.e. 2 is a quadratic non-residue mod `p`.
///
/// Every odd prime with 2 as a primitive root satisfies this.
pub fn necessary_condition(p: u64) -> bool {
    matches!(p % 8, 3 | 5)
}

/// An odd prime together with the factorization of `p - 1`, which is what
/// makes primitive-root questions decidable.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CertifiedPrime {
    modulus: Modulus,
    p_minus_1: Factorization,
    two_is_primitive: bool,
    meets_necessary_condition: bool,
}

impl CertifiedPrime {
    /// Fails with [`PrimeError::NotPrime`] for composites and with
    /// [`ArithError::InvalidModulus`] for 2 and primes at or above 2^62.
    pub fn certify(p: u64) -> Result<Self, PrimeError> {
        if !is_prime(p) {
            return Err(PrimeError::NotPrime(p));
        }
        let modulus = Modulus::new(p)?;
        let p_minus_1 = factorize(p - 1)?;
        let two_is_primitive = has_full_order(2, p, &p_minus_1);
        Ok(CertifiedPrime {
            modulus,
            p_minus_1,
            two_is_primitive,
            meets_necessary_condition: necessary_condition(p),
        })
    }

    #[inline]
    pub fn p(&self) -> u64 {
        self.modulus.get()
    }

    #[inline]
    pub fn modulus(&self) -> Modulus {
        self.modulus
    }

    pub fn p_minus_1(&self) -> &Factorization {
        &self.p_minus_1
    }

    #[inline]
    pub fn two_is_primitive(&self) -> bool {
        self.two_is_primitive
    }

    #[inline]
    pub fn meets_necessary_condition(&self) -> bool {
        self.meets_necessary_condition
    }

    /// Every primitive root, ascending. Linear in `p`.
    pub fn primitive_roots(&self) -> impl Iterator<Item = Residue> + '_ {
        (1..self.p())
            .filter(|&g| has_full_order(g, self.p(), &self.p_minus_1))
            .map(|g| self.modulus.residue(g))
    }
}

fn has_full_order(g: u64, p: u64, p_minus_1: &Factorization) -> bool {
    p_minus_1
        .primes()
        .all(|q| pow_mod_u64(g, (p - 1) / q, p) != 1)
}

/// Whether `g` has multiplicative order exactly `p - 1`.
pub fn is_primitive_root(g: Residue, cp: &CertifiedPrime) -> Result<bool, PrimeError> {
    if g.modulus() != cp.modulus() {
        return Err(ArithError::ModulusMismatch(g.modulus().get(), cp.p()).into());
    }
    let g = g.nonzero()?;
    Ok(has_full_order(g.value(), cp.p(), &cp.p_minus_1))
}

/// Certified primes in `[lo, hi]` for which 2 is a primitive root, ascending.
pub fn enumerate_artin2_primes(lo: u64, hi: u64) -> Result<Vec<CertifiedPrime>, PrimeError> {
    enumerate_artin2_primes_with_budget(lo, hi, SieveBudget::default())
}

pub fn enumerate_artin2_primes_with_budget(
    lo: u64,
    hi: u64,
    budget: SieveBudget,
) -> Result<Vec<CertifiedPrime>, PrimeError> {
    if lo > hi {
        return Err(PrimeError::EmptyRange { lo, hi });
    }
    if hi < 3 {
        return Ok(Vec::new());
    }
    let primes = primes_in_range(lo.max(3), hi, budget)?;
    let mut out = Vec::new();
    for p in primes.into_iter().filter(|&p| necessary_condition(p)) {
        let cp = CertifiedPrime::certify(p)?;
        if cp.two_is_primitive {
            out.push(cp);
        }
    }
    Ok(out)
}
