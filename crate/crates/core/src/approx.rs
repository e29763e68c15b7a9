//! Configurable-precision complex floating point, backed by `astro-float`.
//!
//! Precision is given in significant decimal digits (15 minimum, 30 by
//! default) and converted to a binary mantissa length with guard bits.
//! Every operation rounds to the working precision, so the per-operation
//! error is bounded by one unit in the last place.

use alloc::string::String;
use alloc::string::ToString;
use astro_float::{BigFloat, Consts, RoundingMode, Sign};
use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use crate::rational::BigRat;

pub const DEFAULT_DIGITS: u32 = 30;
pub const MIN_DIGITS: u32 = 15;

const RM: RoundingMode = RoundingMode::ToEven;

fn bits_for(digits: u32) -> usize {
    let digits = digits.max(MIN_DIGITS);
    let raw = (digits as f64 * core::f64::consts::LOG2_10) as usize + 32;
    // astro-float constructors misbehave at precisions that are not a
    // whole number of 64-bit words, so round up.
    raw.next_multiple_of(64)
}

fn bigint_to_bigfloat(n: &BigInt, p: usize) -> BigFloat {
    let (sign, digits) = n.to_u64_digits();
    let mut acc = BigFloat::from_u8(0, p);
    let base = BigFloat::from_u128(1u128 << 64, p);
    for d in digits.iter().rev() {
        acc = acc.mul(&base, p, RM).add(&BigFloat::from_u64(*d, p), p, RM);
    }
    if sign == num_bigint::Sign::Minus {
        acc = acc.neg();
    }
    acc
}

fn rat_to_bigfloat(r: &BigRat, p: usize) -> BigFloat {
    let num = bigint_to_bigfloat(r.numer(), p);
    let den = bigint_to_bigfloat(r.denom(), p);
    num.div(&den, p, RM)
}

pub(crate) fn bigfloat_to_f64(x: &BigFloat) -> f64 {
    if x.is_zero() {
        return 0.0;
    }
    let Some((words, _, sign, exp, _)) = x.as_raw_parts() else {
        return f64::NAN;
    };
    // words are little-endian; the mantissa is normalized to the top bit.
    let mut mant = 0u128;
    let mut got = 0u32;
    for w in words.iter().rev() {
        if got >= 128 {
            break;
        }
        mant = (mant << 64) | *w as u128;
        got += 64;
    }
    let mut v = mant as f64;
    // value = mant * 2^(exp - got)
    v *= libm::exp2((exp as i64 - got as i64) as f64);
    if sign == Sign::Neg {
        v = -v;
    }
    v
}

/// A complex number at a configurable working precision.
#[derive(Debug, Clone)]
pub struct ApproxComplex {
    re: BigFloat,
    im: BigFloat,
    digits: u32,
}

impl ApproxComplex {
    pub fn new(re: f64, im: f64, digits: u32) -> Self {
        let p = bits_for(digits);
        ApproxComplex {
            re: BigFloat::from_f64(re, p),
            im: BigFloat::from_f64(im, p),
            digits,
        }
    }

    pub fn from_rational(re: &BigRat, digits: u32) -> Self {
        let p = bits_for(digits);
        ApproxComplex {
            re: rat_to_bigfloat(re, p),
            im: BigFloat::from_u8(0, p),
            digits,
        }
    }

    pub fn digits(&self) -> u32 {
        self.digits
    }

    fn p(&self) -> usize {
        bits_for(self.digits)
    }

    pub fn add(&self, o: &ApproxComplex) -> ApproxComplex {
        let p = self.p();
        ApproxComplex {
            re: self.re.add(&o.re, p, RM),
            im: self.im.add(&o.im, p, RM),
            digits: self.digits,
        }
    }

    pub fn sub(&self, o: &ApproxComplex) -> ApproxComplex {
        let p = self.p();
        ApproxComplex {
            re: self.re.sub(&o.re, p, RM),
            im: self.im.sub(&o.im, p, RM),
            digits: self.digits,
        }
    }

    pub fn mul(&self, o: &ApproxComplex) -> ApproxComplex {
        let p = self.p();
        let ac = self.re.mul(&o.re, p, RM);
        let bd = self.im.mul(&o.im, p, RM);
        let ad = self.re.mul(&o.im, p, RM);
        let bc = self.im.mul(&o.re, p, RM);
        ApproxComplex {
            re: ac.sub(&bd, p, RM),
            im: ad.add(&bc, p, RM),
            digits: self.digits,
        }
    }

    pub fn abs(&self) -> f64 {
        let p = self.p();
        let rr = self.re.mul(&self.re, p, RM);
        let ii = self.im.mul(&self.im, p, RM);
        bigfloat_to_f64(&rr.add(&ii, p, RM).sqrt(p, RM))
    }

    pub fn re_f64(&self) -> f64 {
        bigfloat_to_f64(&self.re)
    }

    pub fn im_f64(&self) -> f64 {
        bigfloat_to_f64(&self.im)
    }

    /// `|self - other|` as a double.
    pub fn dist(&self, o: &ApproxComplex) -> f64 {
        self.sub(o).abs()
    }

    pub fn to_decimal_string(&self) -> String {
        let mut cc = Consts::new().expect("constants cache");
        let mut fmt = |x: &BigFloat| {
            x.format(astro_float::Radix::Dec, RM, &mut cc)
                .unwrap_or_else(|_| "nan".to_string())
        };
        let re = fmt(&self.re);
        let (sign, im_abs) = if self.im.sign() == Some(Sign::Neg) {
            ("-", fmt(&self.im.neg()))
        } else {
            ("+", fmt(&self.im))
        };
        alloc::format!("{re} {sign} {im_abs}i")
    }
}

/// Numerical value of `sum coeffs[k] * zeta_order^k` at the requested
/// precision. Used by `CycNumber::embed`.
pub fn embed_roots<'a, I>(order: u64, coeffs: I, digits: u32) -> ApproxComplex
where
    I: Iterator<Item = (usize, &'a BigRat)>,
{
    let digits = digits.max(MIN_DIGITS);
    let p = bits_for(digits) + 64;
    let mut cc = Consts::new().expect("constants cache");
    let tau = cc.pi(p, RM).mul(&BigFloat::from_u8(2, p), p, RM);
    let m = BigFloat::from_u64(order, p);
    let mut re = BigFloat::from_u8(0, p);
    let mut im = BigFloat::from_u8(0, p);
    for (k, c) in coeffs {
        if c.is_zero() {
            continue;
        }
        let v = rat_to_bigfloat(c, p);
        let ang = tau
            .mul(&BigFloat::from_u64(k as u64, p), p, RM)
            .div(&m, p, RM);
        let cos = ang.cos(p, RM, &mut cc);
        let sin = ang.sin(p, RM, &mut cc);
        re = re.add(&v.mul(&cos, p, RM), p, RM);
        im = im.add(&v.mul(&sin, p, RM), p, RM);
    }
    ApproxComplex { re, im, digits }
}

/// Round a rational to the nearest double.
pub fn rat_to_f64(r: &BigRat) -> f64 {
    if let (Some(n), Some(d)) = (r.numer().to_f64(), r.denom().to_f64()) {
        if n.is_finite() && d.is_finite() && d != 0.0 {
            return n / d;
        }
    }
    // fall back through high-precision division for huge operands
    let p = bits_for(20);
    bigfloat_to_f64(&rat_to_bigfloat(r, p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclotomic::cyc_make;
    use crate::rational::{rat, rat_int};

    #[test]
    fn embed_examples() {
        let i = cyc_make(4, 1).embed(20);
        assert!((i.re_f64() - 0.0).abs() < 1e-15);
        assert!((i.im_f64() - 1.0).abs() < 1e-15);
        let z6 = cyc_make(6, 1).embed(30);
        assert!((z6.re_f64() - 0.5).abs() < 1e-14);
        assert!((z6.im_f64() - 0.866_025_403_784_438_6).abs() < 1e-14);
        let m1 = crate::cyclotomic::CycNumber::from_int(-1).embed(15);
        assert!((m1.re_f64() + 1.0).abs() < 1e-14);
        assert_eq!(m1.im_f64(), 0.0);
    }

    #[test]
    fn arithmetic_respected() {
        let a = cyc_make(12, 1);
        let b = cyc_make(12, 7);
        let prod = a.mul(&b).embed(25);
        let sep = a.embed(25).mul(&b.embed(25));
        assert!(prod.dist(&sep) < 1e-20);
    }

    #[test]
    fn rational_conversion() {
        assert_eq!(rat_to_f64(&rat(1, 2)), 0.5);
        assert_eq!(rat_to_f64(&rat_int(-3)), -3.0);
        let big = BigRat::new(
            num_bigint::BigInt::from(10).pow(40) + 1,
            num_bigint::BigInt::from(10).pow(40),
        );
        assert!((rat_to_f64(&big) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn bigfloat_f64_roundtrip() {
        for v in [0.0, 1.5, -2.25, 1e-20, 3.7e10, -0.1] {
            let x = BigFloat::from_f64(v, 128);
            assert_eq!(bigfloat_to_f64(&x), v);
        }
    }
}
