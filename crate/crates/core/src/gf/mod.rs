//! Finite fields GF(p^t), vectors over them, and subspaces of `F_q^n` kept in
//! reduced row echelon form.

mod field;
mod subspace;

pub use field::{default_modulus, prime_power, Field, Fq, MAX_ORDER};
pub use subspace::{points, qbinom, CosetReps, Subspace, SubspaceIter};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GfError {
    #[error("{0} is not prime")]
    NotPrime(u32),
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("field order {p}^{t} exceeds 2^16")]
    TooLarge { p: u32, t: u32 },
    #[error("modulus {0:?} is not monic irreducible")]
    BadModulus(Vec<u32>),
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,
    #[error("expected vectors of length {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("{what} {value} out of range 0..={max}")]
    OutOfRange { what: &'static str, value: u64, max: u64 },
    #[error("{0} is not a field element")]
    BadCoordinate(String),
    #[error("count overflows 128 bits")]
    Overflow,
}
