//! Reference discrete-log algorithms for an arbitrary generator, used to
//! cross-check the halving solver.

use std::collections::HashMap;

use thiserror::Error;

use crate::arith::{mul_mod_u64, pow_mod_u64, ArithError, Exponent, Residue};
use crate::primes::{is_primitive_root, CertifiedPrime, PrimeError};

/// Default ceiling on baby-step table entries.
pub const BSGS_TABLE_BUDGET: u64 = 1 << 24;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("{g} is not a primitive root mod {p}")]
    NotGenerator { g: u64, p: u64 },
    #[error("baby-step table of {needed} entries exceeds the budget of {budget}")]
    TableBudget { needed: u64, budget: u64 },
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error(transparent)]
    Prime(#[from] PrimeError),
}

/// Find `n` with `g^n = b` in `F_p^*`, `g` a generator.
#[derive(Debug, Clone, Copy)]
pub struct DlpInstance<'a> {
    cp: &'a CertifiedPrime,
    g: Residue,
    b: Residue,
}

impl<'a> DlpInstance<'a> {
    pub fn new(cp: &'a CertifiedPrime, g: Residue, b: Residue) -> Result<Self, OracleError> {
        if b.modulus() != cp.modulus() {
            return Err(ArithError::ModulusMismatch(b.modulus().get(), cp.p()).into());
        }
        b.nonzero()?;
        if !is_primitive_root(g, cp)? {
            return Err(OracleError::NotGenerator {
                g: g.value(),
                p: cp.p(),
            });
        }
        Ok(DlpInstance { cp, g, b })
    }

    /// Base 2 on a prime where 2 is primitive.
    pub fn base_two(cp: &'a CertifiedPrime, b: Residue) -> Result<Self, OracleError> {
        DlpInstance::new(cp, cp.modulus().residue(2), b)
    }

    pub fn prime(&self) -> &CertifiedPrime {
        self.cp
    }

    pub fn g(&self) -> Residue {
        self.g
    }

    pub fn b(&self) -> Residue {
        self.b
    }
}

/// A discrete log together with the number of group multiplications spent.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Counted {
    pub exponent: Exponent,
    pub group_ops: u64,
}

/// Walks `1, g, g^2, ...` until it meets `b`.
pub fn brute_force_dlog(inst: &DlpInstance<'_>) -> Exponent {
    brute_force_dlog_counted(inst).exponent
}

pub fn brute_force_dlog_counted(inst: &DlpInstance<'_>) -> Counted {
    let p = inst.cp.p();
    let g = inst.g.value();
    let target = inst.b.value();
    let mut acc = 1u64;
    let mut n = 0u64;
    if p < 1 << 32 {
        while acc != target {
            acc = acc * g % p;
            n += 1;
        }
    } else {
        while acc != target {
            acc = mul_mod_u64(acc, g, p);
            n += 1;
        }
    }
    Counted {
        exponent: inst.cp.modulus().exponent(n),
        group_ops: n,
    }
}

/// Baby-step table for one `(p, g)`; reusable across targets.
#[derive(Debug, Clone)]
pub struct BsgsTable {
    p: u64,
    order: u64,
    m: u64,
    baby: HashMap<u64, u64>,
    giant: u64,
}

impl BsgsTable {
    pub fn new(cp: &CertifiedPrime, g: Residue, budget: u64) -> Result<Self, OracleError> {
        let p = cp.p();
        let order = p - 1;
        let m = order.isqrt() + u64::from(order.isqrt().pow(2) < order);
        if m > budget {
            return Err(OracleError::TableBudget { needed: m, budget });
        }
        let g = g.value();
        let mut baby = HashMap::with_capacity(m as usize);
        let mut acc = 1u64;
        for j in 0..m {
            baby.entry(acc).or_insert(j);
            acc = mul_mod_u64(acc, g, p);
        }
        // g^(-m) = g^(order - m)
        let giant = pow_mod_u64(g, (order - m % order) % order, p);
        Ok(BsgsTable {
            p,
            order,
            m,
            baby,
            giant,
        })
    }

    /// `None` only if `b` is not a power of the table's base.
    pub fn solve_counted(&self, b: u64) -> Option<(u64, u64)> {
        let mut gamma = b % self.p;
        for i in 0..self.m {
            if let Some(&j) = self.baby.get(&gamma) {
                return Some(((i * self.m + j) % self.order, self.m + i));
            }
            gamma = mul_mod_u64(gamma, self.giant, self.p);
        }
        None
    }
}

/// Baby-step giant-step with the default table budget.
pub fn bsgs_dlog(inst: &DlpInstance<'_>) -> Result<Exponent, OracleError> {
    bsgs_dlog_counted(inst, BSGS_TABLE_BUDGET).map(|c| c.exponent)
}

pub fn bsgs_dlog_counted(inst: &DlpInstance<'_>, budget: u64) -> Result<Counted, OracleError> {
    let table = BsgsTable::new(inst.cp, inst.g, budget)?;
    let (n, ops) = table
        .solve_counted(inst.b.value())
        .expect("a generator reaches every nonzero residue");
    Ok(Counted {
        exponent: inst.cp.modulus().exponent(n),
        group_ops: ops,
    })
}

/// `log_g(a) - log_g(p - a) = (p - 1) / 2 (mod p - 1)`, with both logs
/// computed by BSGS.
pub fn lemma_negation_check(
    cp: &CertifiedPrime,
    g: Residue,
    a: Residue,
) -> Result<bool, OracleError> {
    let neg = a.nonzero()?.negate();
    let la = bsgs_dlog(&DlpInstance::new(cp, g, a)?)?;
    let lneg = bsgs_dlog(&DlpInstance::new(cp, g, neg)?)?;
    Ok((la - lneg).value() == cp.modulus().half_order())
}

/// Every primitive root `g` gives `log_g(-1) = (p - 1) / 2`.
///
/// Enumerates all primitive roots and runs the brute-force oracle for each,
/// so cost is roughly quadratic in `p`.
pub fn generator_independence_check(cp: &CertifiedPrime) -> bool {
    let minus_one = cp.modulus().residue(cp.p() - 1);
    let half = cp.modulus().half_order();
    cp.primitive_roots().all(|g| {
        let inst = DlpInstance {
            cp,
            g,
            b: minus_one,
        };
        brute_force_dlog(&inst).value() == half
    })
}
