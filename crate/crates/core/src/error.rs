//! Shared error type for the whole crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("not a prime: {0}")]
    NotPrime(u64),

    #[error("size cap exceeded: {0}")]
    SizeCap(String),

    #[error("unsupported group: {0}")]
    UnsupportedGroup(String),

    #[error("inversion of zero in GF({q})")]
    ZeroInverse { q: u64 },

    #[error("word syntax error at byte {pos}: {msg}")]
    WordSyntax { pos: usize, msg: String },

    #[error("exceptional outer automorphism of {0} unsupported")]
    ExceptionalOuterAutomorphism(String),

    #[error("no usable modular prime below 2^31 for exponent {exponent}")]
    NoDixonPrime { exponent: u64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("verification mismatch: {0}")]
    Mismatch(String),

    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
