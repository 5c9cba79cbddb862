// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

/// Errors raised by the arithmetic, linear algebra and classification layers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not square-free")]
    NotSquareFree(i128),
    #[error("expected a positive integer, got {0}")]
    ZeroOrNegative(i128),
    #[error("gcd({a}, {b}) > 1")]
    NotCoprime { a: i128, b: i128 },
    #[error("{a} has no square root modulo {p}^{e}")]
    NoRoot { a: i128, p: u64, e: u32 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("quadratic Jacobi symbol ill-defined at p = {p}")]
    IllDefined { p: u64 },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("n = {0} has no odd prime factor")]
    EmptyFactorization(u64),
    #[error("no representation of {value} as {form}")]
    NoRepresentation { value: i128, form: &'static str },
    #[error("|m| must exceed 2, got {0}")]
    OutOfRange(i128),
    #[error("#V1 + #V2 = {0} is not a power of two")]
    CountNotPowerOfTwo(usize),
    #[error("pure 2-Selmer rank of {n} is {s2}, not 2")]
    NotRankTwo { n: u64, s2: usize },
    #[error("internal consistency check failed: {0}")]
    VerificationFailed(String),
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("p-adic precision exhausted at p = {p}")]
    PrecisionExhausted { p: u64 },
    #[error("no local point at {place}")]
    NoPoint { place: String },
    #[error("{0} is not a fundamental discriminant")]
    NotFundamental(i64),
    #[error("|disc| = {0} exceeds the oracle bound")]
    TooLarge(i64),
}

pub type Result<T> = std::result::Result<T, Error>;
