use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("{g} is not a primitive root modulo {modulus}")]
    NotPrimitiveRoot { g: u64, modulus: u64 },

    #[error("modulus {0} exceeds the discrete-log table cap of 2^26")]
    TableTooLarge(u64),

    #[error("{ell} is not a split prime for p = {p} (need ell prime and ell = 1 mod p)")]
    NotSplit { p: u32, ell: u64 },

    #[error("mismatched cyclotomic rings: p = {0} vs p = {1}")]
    RingMismatch(u32, u32),

    #[error("exponent n = {n} must be even and in [2, p-3] for p = {p}")]
    BadExponent { p: u32, n: u32 },

    #[error("Galois index {a} is not a unit modulo {p}")]
    BadGaloisIndex { p: u32, a: u64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("exact computation exceeds memory cap ({bytes} bytes > {cap} bytes)")]
    MemoryCap { bytes: usize, cap: usize },

    #[error("element is zero")]
    Zero,

    #[error("internal consistency check failed: {0}")]
    Internal(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
