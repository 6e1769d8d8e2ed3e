//! Discrete logarithms base 2 in `F_p^*` by halving and negation, plus the
//! number theory needed to certify inputs and the oracles used to check
//! results.

pub mod arith;
pub mod bench;
pub mod cli;
pub mod halving;
pub mod oracles;
pub mod primes;
pub mod verify;

pub use arith::{Exponent, Modulus, Residue};
pub use halving::{solve_halving_negation, SolveReport};
pub use primes::CertifiedPrime;
