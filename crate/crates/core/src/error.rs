//! Crate-wide error type.

use alloc::string::String;
use core::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// Matrix is not an element of the requested congruence subgroup.
    NotInGroup(String),
    /// Matrix does not lie in the Hecke double coset under consideration.
    NotInDoubleCoset(String),
    /// Integer argument violates the residue-class precondition.
    BadResidue { value: i64, modulus: i64 },
    /// Prime argument outside the range an operation supports.
    BadPrime(i64),
    /// Point outside the domain of the form being evaluated.
    DomainError(String),
    /// Moebius action hit the pole `x = -d/c`.
    PoleError(String),
    /// A quantity that must be a rational integer came out otherwise.
    NonIntegerResult(String),
    /// Series/Bessel truncation could not reach the requested accuracy.
    ConvergenceError(String),
    /// Malformed input (CLI parsing and similar).
    Parse(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::NotInGroup(m) => write!(f, "not in group: {m}"),
            Error::NotInDoubleCoset(m) => write!(f, "not in double coset: {m}"),
            Error::BadResidue { value, modulus } => {
                write!(f, "bad residue: {value} is not 1 mod {modulus}")
            }
            Error::BadPrime(p) => write!(f, "bad prime: {p}"),
            Error::DomainError(m) => write!(f, "domain error: {m}"),
            Error::PoleError(m) => write!(f, "pole: {m}"),
            Error::NonIntegerResult(m) => write!(f, "non-integer result: {m}"),
            Error::ConvergenceError(m) => write!(f, "convergence failure: {m}"),
            Error::Parse(m) => write!(f, "parse error: {m}"),
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
