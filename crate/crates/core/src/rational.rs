//! Arbitrary-precision rational scalars.
//!
//! `BigRat` is the value type for every exact rational quantity in the
//! crate: matrix entries, series coefficients, cyclotomic coordinates.
//! It is backed by `num-rational`, which keeps values in lowest terms
//! with a positive denominator.

use alloc::string::ToString;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type BigRat = num_rational::BigRational;

/// Rational from an integer.
pub fn rat_int(n: i64) -> BigRat {
    BigRat::from_integer(BigInt::from(n))
}

/// Rational `n/d`, `d != 0`.
pub fn rat(n: i64, d: i64) -> BigRat {
    BigRat::new(BigInt::from(n), BigInt::from(d))
}

/// The integer value of `r` if its denominator is 1.
pub fn as_integer(r: &BigRat) -> Option<BigInt> {
    r.is_integer().then(|| r.to_integer())
}

/// Parses `a`, `-a`, `a/c` into a rational.
pub fn parse_rational(s: &str) -> Result<BigRat> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = num
        .parse()
        .map_err(|_| Error::Parse(s.to_string()))?;
    let d: BigInt = den
        .parse()
        .map_err(|_| Error::Parse(s.to_string()))?;
    if d.is_zero() {
        return Err(Error::Parse(s.to_string()));
    }
    Ok(BigRat::new(n, d))
}

/// Nearest integer to `r`, ties rounded toward zero.
pub fn round_nearest_ties_to_zero(r: &BigRat) -> BigInt {
    let two = BigInt::from(2);
    let floor = r.floor().to_integer();
    let frac = r - BigRat::from_integer(floor.clone());
    // frac in [0,1); compare against 1/2
    let half_cmp = (&frac * BigRat::from_integer(two)).cmp(&BigRat::one());
    match half_cmp {
        core::cmp::Ordering::Less => floor,
        core::cmp::Ordering::Greater => floor + 1,
        core::cmp::Ordering::Equal => {
            // tie: pick the candidate with smaller absolute value
            let up: BigInt = &floor + 1;
            if floor.abs() <= up.abs() {
                floor
            } else {
                up
            }
        }
    }
}
