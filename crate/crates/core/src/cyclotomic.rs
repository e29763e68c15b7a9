//! Exact arithmetic in cyclotomic fields `Q(zeta_M)`, `zeta_M = e^{2 pi i / M}`.
//!
//! Two representations are used:
//!
//! - [`CycNumber`]: the canonical form, a polynomial in `zeta_M` reduced
//!   modulo the `M`-th cyclotomic polynomial `Phi_M`. Canonical forms are
//!   unique, so equality of stored coefficients is equality of values and
//!   the zero test is exact.
//! - [`ZetaPoly`]: an unreduced integer-combination-of-roots workhorse,
//!   a coefficient vector modulo `x^M - 1` only. Multiplying by a root or
//!   by a binomial `1 - zeta^k` costs `O(M)`, which makes it the right
//!   carrier for the long product/sum evaluations of the quantum forms.
//!   It canonicalizes into a `CycNumber` on demand and has a fast exact
//!   zero test through a tensor-basis reduction.

use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::approx::ApproxComplex;
use crate::error::{Error, Result};
use crate::numth;
use crate::rational::BigRat;

// ---------------------------------------------------------------------------
// integer polynomial helpers (dense, little-endian coefficient vectors)
// ---------------------------------------------------------------------------

fn int_poly_mul_xk_minus_1(f: &[BigInt], k: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); f.len() + k];
    for (i, c) in f.iter().enumerate() {
        out[i + k] += c;
        out[i] -= c;
    }
    out
}

/// Exact division by `x^k - 1`; panics if the division is not exact.
fn int_poly_div_xk_minus_1(f: &[BigInt], k: usize) -> Vec<BigInt> {
    let n = f.len() - 1; // degree of f
    assert!(n >= k);
    let mut q = vec![BigInt::zero(); n - k + 1];
    for j in (0..=n - k).rev() {
        let carry = if j + k <= n - k {
            q[j + k].clone()
        } else {
            BigInt::zero()
        };
        q[j] = &f[j + k] + carry;
    }
    for j in 0..k {
        assert_eq!(f[j], -&q[j], "inexact division by x^{k} - 1");
    }
    q
}

/// The `m`-th cyclotomic polynomial as an integer coefficient vector,
/// built from the Moebius product over divisors of the radical of `m`.
pub fn cyclotomic_poly(m: u64) -> Vec<BigInt> {
    assert!(m >= 1);
    let primes: Vec<u64> = numth::factor(m).into_iter().map(|(p, _)| p).collect();
    let r = primes.len();
    // subsets of the prime set; even-size subsets multiply, odd-size divide
    let mut muls: Vec<u64> = Vec::new();
    let mut divs: Vec<u64> = Vec::new();
    for mask in 0u32..(1 << r) {
        let mut d = 1u64;
        for (i, p) in primes.iter().enumerate() {
            if mask & (1 << i) != 0 {
                d *= p;
            }
        }
        if mask.count_ones() % 2 == 0 {
            muls.push(m / d);
        } else {
            divs.push(m / d);
        }
    }
    let mut f = vec![BigInt::one()];
    for k in muls {
        f = int_poly_mul_xk_minus_1(&f, k as usize);
    }
    for k in divs {
        f = int_poly_div_xk_minus_1(&f, k as usize);
    }
    debug_assert_eq!(f.len() as u64 - 1, numth::phi(m));
    f
}

/// Remainder of `f` (rational coefficients) modulo the monic integer
/// polynomial `g`. `f` is consumed in place.
fn rat_poly_rem(f: Vec<BigRat>, g: &[BigInt]) -> Vec<BigRat> {
    let dg = g.len() - 1;
    debug_assert!(g[dg].is_one());
    // clear denominators and reduce over the integers: rational ops
    // renormalize on every subtraction, which dominates for long inputs
    let mut den = BigInt::one();
    for c in &f {
        if !c.is_zero() {
            let d = c.denom();
            den = &den / den.gcd(d) * d;
        }
    }
    let mut fi: Vec<BigInt> = f
        .iter()
        .map(|c| {
            if c.is_zero() {
                BigInt::zero()
            } else {
                c.numer() * (&den / c.denom())
            }
        })
        .collect();
    while fi.len() > dg {
        let lead = fi.pop().unwrap();
        if lead.is_zero() {
            continue;
        }
        let shift = fi.len() - dg;
        for (i, gc) in g[..dg].iter().enumerate() {
            if !gc.is_zero() {
                fi[shift + i] -= &lead * gc;
            }
        }
    }
    fi.resize(dg, BigInt::zero());
    fi.into_iter()
        .map(|n| BigRat::new(n, den.clone()))
        .collect()
}

fn rat_poly_trim(f: &mut Vec<BigRat>) {
    while f.last().map_or(false, |c| c.is_zero()) {
        f.pop();
    }
}

fn rat_poly_mul(a: &[BigRat], b: &[BigRat]) -> Vec<BigRat> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigRat::zero(); a.len() + b.len() - 1];
    for (i, ai) in a.iter().enumerate() {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            if !bj.is_zero() {
                out[i + j] += ai * bj;
            }
        }
    }
    out
}

/// Division with remainder by a monic-after-scaling divisor; returns (q, r).
fn rat_poly_divmod(mut f: Vec<BigRat>, g: &[BigRat]) -> (Vec<BigRat>, Vec<BigRat>) {
    let mut g = g.to_vec();
    rat_poly_trim(&mut g);
    assert!(!g.is_empty(), "division by zero polynomial");
    let dg = g.len() - 1;
    rat_poly_trim(&mut f);
    if f.len() <= dg {
        return (Vec::new(), f);
    }
    let lead_inv = g[dg].recip();
    let mut q = vec![BigRat::zero(); f.len() - dg];
    while f.len() > dg {
        let c = f.pop().unwrap() * &lead_inv;
        let shift = f.len() - dg;
        if !c.is_zero() {
            for (i, gc) in g[..dg].iter().enumerate() {
                if !gc.is_zero() {
                    let t = &c * gc;
                    f[shift + i] -= t;
                }
            }
            q[shift] = c;
        }
        rat_poly_trim(&mut f);
    }
    (q, f)
}

/// Inverse of `a` modulo the irreducible monic integer polynomial `g`,
/// by the extended Euclidean algorithm over `Q[x]`.
fn rat_poly_inv_mod(a: &[BigRat], g: &[BigInt]) -> Option<Vec<BigRat>> {
    let g_rat: Vec<BigRat> = g.iter().map(|c| BigRat::from_integer(c.clone())).collect();
    let mut r0 = g_rat;
    let mut r1 = a.to_vec();
    rat_poly_trim(&mut r1);
    if r1.is_empty() {
        return None;
    }
    let mut s0: Vec<BigRat> = Vec::new();
    let mut s1: Vec<BigRat> = vec![BigRat::one()];
    while !r1.is_empty() {
        let (q, r) = rat_poly_divmod(r0.clone(), &r1);
        let qs1 = rat_poly_mul(&q, &s1);
        let mut s2 = s0.clone();
        s2.resize(s2.len().max(qs1.len()), BigRat::zero());
        for (i, c) in qs1.into_iter().enumerate() {
            s2[i] -= c;
        }
        rat_poly_trim(&mut s2);
        r0 = r1;
        r1 = r;
        s0 = s1;
        s1 = s2;
    }
    // r0 = gcd (a nonzero constant since g is irreducible and a != 0 mod g)
    if r0.len() != 1 {
        return None;
    }
    let scale = r0[0].recip();
    Some(s0.iter().map(|c| c * &scale).collect())
}

// ---------------------------------------------------------------------------
// ZetaPoly: coefficients modulo x^M - 1
// ---------------------------------------------------------------------------

/// A rational combination of the `M`-th roots of unity, kept unreduced as a
/// coefficient vector modulo `x^M - 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZetaPoly {
    order: u64,
    coeffs: Vec<BigRat>,
}

impl ZetaPoly {
    pub fn zero(order: u64) -> Self {
        assert!(order >= 1);
        ZetaPoly {
            order,
            coeffs: vec![BigRat::zero(); order as usize],
        }
    }

    pub fn from_rational(order: u64, r: BigRat) -> Self {
        let mut z = Self::zero(order);
        z.coeffs[0] = r;
        z
    }

    /// Build from an explicit coefficient vector modulo `x^order - 1`.
    pub fn from_coeffs(order: u64, coeffs: Vec<BigRat>) -> Self {
        assert_eq!(coeffs.len() as u64, order);
        ZetaPoly { order, coeffs }
    }

    /// `zeta_order^k`.
    pub fn root(order: u64, k: i64) -> Self {
        let mut z = Self::zero(order);
        let k = k.rem_euclid(order as i64) as usize;
        z.coeffs[k] = BigRat::one();
        z
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn coeffs_slice(&self) -> &[BigRat] {
        &self.coeffs
    }

    fn idx(&self, k: i64) -> usize {
        k.rem_euclid(self.order as i64) as usize
    }

    pub fn add_assign(&mut self, other: &ZetaPoly) {
        assert_eq!(self.order, other.order);
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *a += b;
        }
    }

    pub fn sub_assign(&mut self, other: &ZetaPoly) {
        assert_eq!(self.order, other.order);
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *a -= b;
        }
    }

    /// Multiply by `zeta^k` (cyclic index shift).
    pub fn mul_root(&self, k: i64) -> ZetaPoly {
        let m = self.order as usize;
        let k = self.idx(k);
        let mut out = vec![BigRat::zero(); m];
        for (i, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                out[(i + k) % m] = c.clone();
            }
        }
        ZetaPoly {
            order: self.order,
            coeffs: out,
        }
    }

    /// Multiply in place by `1 + c * zeta^k`.
    pub fn mul_binomial(&mut self, c: &BigRat, k: i64) {
        let shifted = self.mul_root(k);
        for (a, b) in self.coeffs.iter_mut().zip(&shifted.coeffs) {
            *a += b * c;
        }
    }

    pub fn scale(&mut self, c: &BigRat) {
        for a in self.coeffs.iter_mut() {
            *a *= c;
        }
    }

    /// Full cyclic-convolution product. Quadratic; fine away from hot loops.
    pub fn mul(&self, other: &ZetaPoly) -> ZetaPoly {
        assert_eq!(self.order, other.order);
        let m = self.order as usize;
        let mut out = vec![BigRat::zero(); m];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    out[(i + j) % m] += a * b;
                }
            }
        }
        ZetaPoly {
            order: self.order,
            coeffs: out,
        }
    }

    /// Re-embed into `Q(zeta_L)` for `order | L`.
    pub fn lift(&self, new_order: u64) -> ZetaPoly {
        assert_eq!(new_order % self.order, 0);
        let s = (new_order / self.order) as usize;
        let mut out = ZetaPoly::zero(new_order);
        for (i, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                out.coeffs[i * s] = c.clone();
            }
        }
        out
    }

    /// Exact zero test via reduction in the tensor basis of
    /// `Q(zeta_M) = (x) Q(zeta_{q^a})`: each prime-power axis is reduced with
    /// `1 + zeta^{q^{a-1}} + ... + zeta^{(q-1) q^{a-1}} = 0`, after which the
    /// coefficients are coordinates in a genuine `Q`-basis.
    pub fn is_zero(&self) -> bool {
        self.tensor_reduce()
            .map_or_else(|| self.coeffs.iter().all(|c| c.is_zero()), |t| {
                t.iter().all(|c| c.is_zero())
            })
    }

    /// The rational value, if the element lies in `Q`.
    pub fn rational_value(&self) -> Option<BigRat> {
        match self.tensor_reduce() {
            None => {
                // order 1
                Some(self.coeffs[0].clone())
            }
            Some(t) => {
                if t[1..].iter().all(|c| c.is_zero()) {
                    Some(t[0].clone())
                } else {
                    None
                }
            }
        }
    }

    /// Reduce into the tensor basis; `None` when the order is 1 (already a
    /// rational scalar).
    fn tensor_reduce(&self) -> Option<Vec<BigRat>> {
        let m = self.order;
        if m == 1 {
            return None;
        }
        let fac = numth::factor(m);
        let axes: Vec<u64> = fac.iter().map(|&(p, e)| p.pow(e)).collect();
        let mults: Vec<u64> = axes
            .iter()
            .map(|&mi| numth::inv_mod((m / mi) % mi, mi).expect("coprime cofactor"))
            .collect();
        // strides for the flattened mixed-radix array
        let mut strides = vec![1usize; axes.len()];
        for i in 1..axes.len() {
            strides[i] = strides[i - 1] * axes[i - 1] as usize;
        }
        let mut a = vec![BigRat::zero(); m as usize];
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mut pos = 0usize;
            for (i, (&mi, &ti)) in axes.iter().zip(&mults).enumerate() {
                let ji = ((k as u64 % mi) * (ti % mi)) % mi;
                pos += ji as usize * strides[i];
            }
            a[pos] += c;
        }
        // reduce each axis
        for (i, &(q, e)) in fac.iter().enumerate() {
            let mi = axes[i] as usize;
            let step = q.pow(e - 1) as usize; // q^{a-1}
            let cut = (q as usize - 1) * step; // phi(q^a)
            let stride = strides[i];
            let total = m as usize;
            // iterate over all positions whose axis-i coordinate is >= cut
            let block = stride * mi;
            let mut base = 0usize;
            while base < total {
                for rem in 0..stride {
                    for j in cut..mi {
                        let src = base + rem + j * stride;
                        if a[src].is_zero() {
                            continue;
                        }
                        let c = core::mem::replace(&mut a[src], BigRat::zero());
                        let r = j - cut;
                        for t in 0..(q as usize - 1) {
                            let dst = base + rem + (t * step + r) * stride;
                            a[dst] -= &c;
                        }
                    }
                }
                base += block;
            }
        }
        Some(a)
    }

    /// Canonical form in `Q(zeta_M)` (remainder modulo `Phi_M`).
    pub fn to_cyc(&self) -> CycNumber {
        let phi_m = cyclotomic_poly(self.order);
        let coeffs = rat_poly_rem(self.coeffs.clone(), &phi_m);
        CycNumber {
            order: self.order,
            coeffs,
        }
    }

    /// Numerical value as a pair `(re, im)` of doubles.
    pub fn embed_f64(&self) -> (f64, f64) {
        let m = self.order as f64;
        let mut re = 0.0;
        let mut im = 0.0;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let v = crate::approx::rat_to_f64(c);
            let ang = core::f64::consts::TAU * k as f64 / m;
            re += v * libm::cos(ang);
            im += v * libm::sin(ang);
        }
        (re, im)
    }
}

// ---------------------------------------------------------------------------
// CycNumber: canonical cyclotomic field element
// ---------------------------------------------------------------------------

/// An element of `Q(zeta_M)` in canonical form: the unique representative
/// of degree `< phi(M)` modulo the `M`-th cyclotomic polynomial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycNumber {
    order: u64,
    /// Coefficients of `zeta^0 .. zeta^{phi(M)-1}`, length exactly `phi(M)`.
    coeffs: Vec<BigRat>,
}

impl CycNumber {
    /// `zeta_order^exponent`.
    pub fn root(order: u64, exponent: i64) -> Self {
        assert!(order >= 1);
        ZetaPoly::root(order, exponent).to_cyc()
    }

    pub fn zero() -> Self {
        Self::from_rational(BigRat::zero())
    }

    pub fn one() -> Self {
        Self::from_rational(BigRat::one())
    }

    pub fn from_rational(r: BigRat) -> Self {
        CycNumber {
            order: 1,
            coeffs: vec![r],
        }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(crate::rational::rat_int(n))
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn coeffs(&self) -> &[BigRat] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Lift the canonical form into `Q(zeta_L)`, `order | L`, and
    /// re-canonicalize there.
    pub fn lift(&self, new_order: u64) -> CycNumber {
        if new_order == self.order {
            return self.clone();
        }
        self.to_zeta_poly().lift(new_order).to_cyc()
    }

    fn to_zeta_poly(&self) -> ZetaPoly {
        let mut z = ZetaPoly::zero(self.order);
        for (i, c) in self.coeffs.iter().enumerate() {
            z.coeffs[i] = c.clone();
        }
        z
    }

    fn unify(a: &CycNumber, b: &CycNumber) -> (CycNumber, CycNumber, u64) {
        let l = numth::lcm(a.order, b.order);
        (a.lift(l), b.lift(l), l)
    }

    pub fn add(&self, other: &CycNumber) -> CycNumber {
        let (mut a, b, order) = Self::unify(self, other);
        for (x, y) in a.coeffs.iter_mut().zip(&b.coeffs) {
            *x += y;
        }
        CycNumber {
            order,
            coeffs: a.coeffs,
        }
    }

    pub fn sub(&self, other: &CycNumber) -> CycNumber {
        let (mut a, b, order) = Self::unify(self, other);
        for (x, y) in a.coeffs.iter_mut().zip(&b.coeffs) {
            *x -= y;
        }
        CycNumber {
            order,
            coeffs: a.coeffs,
        }
    }

    pub fn mul(&self, other: &CycNumber) -> CycNumber {
        // convolve the sparse lifts directly: canonicalizing a low-order
        // factor (e.g. a root-of-unity phase) at the joint order first
        // would densify it and turn the product quadratic in phi(order)
        let l = numth::lcm(self.order, other.order);
        let a = self.to_zeta_poly().lift(l);
        let b = other.to_zeta_poly().lift(l);
        a.mul(&b).to_cyc()
    }

    pub fn neg(&self) -> CycNumber {
        CycNumber {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn scale(&self, r: &BigRat) -> CycNumber {
        CycNumber {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| c * r).collect(),
        }
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inverse(&self) -> Option<CycNumber> {
        let phi_m = cyclotomic_poly(self.order);
        let mut inv = rat_poly_inv_mod(&self.coeffs, &phi_m)?;
        inv.resize(phi_m.len() - 1, BigRat::zero());
        Some(CycNumber {
            order: self.order,
            coeffs: inv,
        })
    }

    /// Integer power, negative exponents through the inverse.
    pub fn pow(&self, e: i64) -> CycNumber {
        let base = if e < 0 {
            self.inverse().expect("zero has no negative powers")
        } else {
            self.clone()
        };
        let mut e = e.unsigned_abs();
        let mut acc = CycNumber::one();
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&sq);
            }
            e >>= 1;
            if e > 0 {
                sq = sq.mul(&sq);
            }
        }
        acc
    }

    /// Equality across possibly different stored orders.
    pub fn eq_value(&self, other: &CycNumber) -> bool {
        let (a, b, _) = Self::unify(self, other);
        a.coeffs == b.coeffs
    }

    /// The rational value if the element lies in `Q`.
    pub fn as_rational(&self) -> Option<BigRat> {
        if self.coeffs[1..].iter().all(|c| c.is_zero()) {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }

    /// The integer value if the element is a rational integer.
    pub fn as_integer(&self) -> Result<BigInt> {
        let r = self
            .as_rational()
            .ok_or_else(|| Error::NonIntegerResult("value is irrational".to_string()))?;
        crate::rational::as_integer(&r)
            .ok_or_else(|| Error::NonIntegerResult("value is a non-integer rational".to_string()))
    }

    /// Numerical embedding under `zeta_M -> e^{2 pi i / M}` at the given
    /// number of significant decimal digits (`>= 15`).
    pub fn embed(&self, digits: u32) -> ApproxComplex {
        crate::approx::embed_roots(self.order, self.coeffs.iter().enumerate(), digits)
    }

    pub fn embed_f64(&self) -> (f64, f64) {
        self.to_zeta_poly().embed_f64()
    }
}

// spec-facing free functions

/// `zeta_order^exponent` in canonical form.
pub fn cyc_make(order: u64, exponent: i64) -> CycNumber {
    CycNumber::root(order, exponent)
}

pub fn cyc_is_rational(a: &CycNumber) -> Option<BigRat> {
    a.as_rational()
}
