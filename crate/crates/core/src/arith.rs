//! Exact modular arithmetic for odd moduli below 2^62.
//!
//! Products are formed in a 128-bit intermediate, so every operation is exact
//! over the whole supported range. Nothing here is constant-time.

use std::fmt;
use std::ops::{Add, Sub};

use thiserror::Error;

/// Exclusive upper bound on supported moduli.
pub const MODULUS_LIMIT: u64 = 1 << 62;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error("modulus {0} must be odd and lie in [3, 2^62)")]
    InvalidModulus(u64),
    #[error("operands live in different rings (mod {0} vs mod {1})")]
    ModulusMismatch(u64, u64),
    #[error("0 is not an element of the multiplicative group mod {0}")]
    ZeroResidue(u64),
    #[error("{value} is outside [1, {max}]")]
    OutOfRange { value: u64, max: u64 },
    #[error("the 2-adic valuation of 0 is undefined")]
    ZeroValuation,
}

/// An odd modulus `p` with `3 <= p < 2^62`.
///
/// Primality is not checked here; see [`crate::primes::CertifiedPrime`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Modulus(u64);

impl Modulus {
    pub fn new(p: u64) -> Result<Self, ArithError> {
        if p < 3 || p.is_multiple_of(2) || p >= MODULUS_LIMIT {
            return Err(ArithError::InvalidModulus(p));
        }
        Ok(Modulus(p))
    }

    #[inline]
    pub const fn get(self) -> u64 {
        self.0
    }

    /// Order of the multiplicative group when the modulus is prime, `p - 1`.
    #[inline]
    pub const fn group_order(self) -> u64 {
        self.0 - 1
    }

    /// `(p - 1) / 2`, the exponent of `-1` for any generator.
    #[inline]
    pub const fn half_order(self) -> u64 {
        (self.0 - 1) / 2
    }

    /// Reduces `value` into `[0, p - 1]`.
    pub fn residue(self, value: u64) -> Residue {
        Residue {
            value: value % self.0,
            modulus: self,
        }
    }

    /// A group element; `value` must already lie in `[1, p - 1]`.
    pub fn unit(self, value: u64) -> Result<Residue, ArithError> {
        if value == 0 {
            return Err(ArithError::ZeroResidue(self.0));
        }
        if value >= self.0 {
            return Err(ArithError::OutOfRange {
                value,
                max: self.0 - 1,
            });
        }
        Ok(Residue {
            value,
            modulus: self,
        })
    }

    /// An exponent reduced modulo `p - 1`.
    pub fn exponent(self, value: u64) -> Exponent {
        Exponent::new(value, self.group_order())
    }
}

impl fmt::Display for Modulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// An integer modulo `p`, always fully reduced.
///
/// Zero is representable, but every group operation rejects it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Residue {
    value: u64,
    modulus: Modulus,
}

impl Residue {
    #[inline]
    pub const fn value(self) -> u64 {
        self.value
    }

    #[inline]
    pub const fn modulus(self) -> Modulus {
        self.modulus
    }

    #[inline]
    pub const fn is_zero(self) -> bool {
        self.value == 0
    }

    #[inline]
    pub const fn is_one(self) -> bool {
        self.value == 1
    }

    /// Fails with [`ArithError::ZeroResidue`] for the zero residue.
    pub fn nonzero(self) -> Result<Self, ArithError> {
        if self.is_zero() {
            Err(ArithError::ZeroResidue(self.modulus.get()))
        } else {
            Ok(self)
        }
    }

    pub fn mul_mod(self, rhs: Residue) -> Result<Residue, ArithError> {
        mul_mod(self, rhs)
    }

    pub fn pow(self, e: u64) -> Residue {
        pow_mod(self, e)
    }

    pub fn negate(self) -> Residue {
        negate(self)
    }
}

impl fmt::Display for Residue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} mod {}", self.value, self.modulus)
    }
}

/// A discrete logarithm: an integer modulo the group order `p - 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Exponent {
    value: u64,
    order: u64,
}

impl Exponent {
    /// Reduces `value` modulo `order`. Panics if `order` is zero.
    pub fn new(value: u64, order: u64) -> Self {
        assert!(order > 0, "exponent order must be positive");
        Exponent {
            value: value % order,
            order,
        }
    }

    pub fn zero(order: u64) -> Self {
        Exponent::new(0, order)
    }

    #[inline]
    pub const fn value(self) -> u64 {
        self.value
    }

    #[inline]
    pub const fn order(self) -> u64 {
        self.order
    }

    /// `self + k mod order`, for a raw integer increment.
    pub fn add_raw(self, k: u64) -> Exponent {
        let sum = (self.value as u128 + k as u128) % self.order as u128;
        Exponent {
            value: sum as u64,
            order: self.order,
        }
    }
}

impl Add for Exponent {
    type Output = Exponent;

    fn add(self, rhs: Exponent) -> Exponent {
        assert_eq!(self.order, rhs.order, "exponents from different groups");
        self.add_raw(rhs.value)
    }
}

impl Sub for Exponent {
    type Output = Exponent;

    fn sub(self, rhs: Exponent) -> Exponent {
        assert_eq!(self.order, rhs.order, "exponents from different groups");
        self.add_raw(self.order - rhs.value)
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.value.fmt(f)
    }
}

/// `a * b mod m` on raw integers, exact for any `m > 0`.
#[inline]
pub fn mul_mod_u64(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

/// `base^e mod m` by right-to-left square-and-multiply.
pub fn pow_mod_u64(base: u64, mut e: u64, m: u64) -> u64 {
    let mut result = 1 % m;
    let mut base = base % m;
    while e > 0 {
        if e & 1 == 1 {
            result = mul_mod_u64(result, base, m);
        }
        base = mul_mod_u64(base, base, m);
        e >>= 1;
    }
    result
}

pub fn mul_mod(a: Residue, b: Residue) -> Result<Residue, ArithError> {
    if a.modulus != b.modulus {
        return Err(ArithError::ModulusMismatch(
            a.modulus.get(),
            b.modulus.get(),
        ));
    }
    Ok(Residue {
        value: mul_mod_u64(a.value, b.value, a.modulus.get()),
        modulus: a.modulus,
    })
}

pub fn pow_mod(base: Residue, e: u64) -> Residue {
    Residue {
        value: pow_mod_u64(base.value, e, base.modulus.get()),
        modulus: base.modulus,
    }
}

/// Splits `n = 2^k * odd_part`, returning `(k, odd_part)`.
#[inline]
pub fn two_adic_valuation(n: u64) -> Result<(u32, u64), ArithError> {
    if n == 0 {
        return Err(ArithError::ZeroValuation);
    }
    let k = n.trailing_zeros();
    Ok((k, n >> k))
}

/// `p - b`. Zero maps to zero.
pub fn negate(b: Residue) -> Residue {
    let p = b.modulus.get();
    Residue {
        value: (p - b.value) % p,
        modulus: b.modulus,
    }
}
