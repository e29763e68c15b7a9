//! Exact evaluation of the quantum modular forms `f_C` and `f_L` at
//! rationals, Hecke operators on them, cocycles, and the root-of-unity
//! identities for `T_C(p)` and `T_L(p)`.
//!
//! At `x = a/c` the value `q = e^{2 pi i x}` is the root of unity
//! `zeta_c^a`, so every series terminates and all values live in
//! `Q(zeta_{24c})` (`f_C`) or `Q(zeta_{8c})` (`f_L`). Series are
//! accumulated in the small field `Q(zeta_c)` and lifted once at the end.

use alloc::string::ToString;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::approx::ApproxComplex;
use crate::cyclotomic::{CycNumber, ZetaPoly};
use crate::error::{Error, Result};
use crate::modgroup::{cusp_classify, gamma0_member, CuspClass, Mat2, ProjPoint};
use crate::multiplier::{nu_eval, MultiplierSystem};
use crate::numth;
use crate::rational::{rat, rat_int, BigRat};

/// A rational evaluation point in lowest terms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QPoint {
    x: BigRat,
}

impl QPoint {
    pub fn new(x: BigRat) -> Self {
        QPoint { x }
    }

    pub fn from_i64(a: i64, c: i64) -> Self {
        QPoint { x: rat(a, c) }
    }

    pub fn value(&self) -> &BigRat {
        &self.x
    }

    pub fn numer(&self) -> &BigInt {
        self.x.numer()
    }

    /// Reduced denominator, always positive.
    pub fn denom(&self) -> u64 {
        u64::try_from(self.x.denom()).expect("denominator fits u64")
    }

    /// The cusp of `Gamma_0(4)` this point lies over.
    pub fn cusp4(&self) -> CuspClass {
        cusp_classify(&ProjPoint::from_rational(&self.x), 4)
    }
}

/// An exact cyclotomic value with a numerical embedding on demand.
#[derive(Debug, Clone)]
pub struct QValue {
    pub exact: CycNumber,
}

impl QValue {
    pub fn new(exact: CycNumber) -> Self {
        QValue { exact }
    }

    pub fn approx(&self, digits: u32) -> ApproxComplex {
        self.exact.embed(digits)
    }

    pub fn embed_f64(&self) -> (f64, f64) {
        self.exact.embed_f64()
    }
}

/// Which quantum modular form.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FormKind {
    FC,
    FL,
}

/// `(a * k) mod m` as a shift exponent, without overflow.
fn expm(a: i64, k: i64, m: u64) -> i64 {
    ((a as i128 * k as i128).rem_euclid(m as i128)) as i64
}

/// `a mod m` of a big integer.
fn amod(a: &BigInt, m: u64) -> i64 {
    let r = a % BigInt::from(m);
    i64::try_from(if r.is_negative() { r + BigInt::from(m) } else { r }).unwrap()
}

/// Integer coefficient vector modulo `x^n - 1`. The `f_L` accumulation is
/// integral throughout, and plain `BigInt` arithmetic avoids the per-op
/// normalization cost of rational coefficients in the hot loop.
struct IntPoly {
    n: usize,
    c: alloc::vec::Vec<BigInt>,
}

impl IntPoly {
    fn zero(n: u64) -> Self {
        IntPoly {
            n: n as usize,
            c: alloc::vec![BigInt::zero(); n as usize],
        }
    }

    fn one(n: u64) -> Self {
        let mut z = Self::zero(n);
        z.c[0] = BigInt::one();
        z
    }

    /// `self * zeta^k`.
    fn mul_root(&self, k: i64) -> IntPoly {
        let k = k.rem_euclid(self.n as i64) as usize;
        let mut out = Self::zero(self.n as u64);
        for (i, a) in self.c.iter().enumerate() {
            if !a.is_zero() {
                out.c[(i + k) % self.n] = a.clone();
            }
        }
        out
    }

    /// `self *= 1 + sign * zeta^k` with `sign = +-1`.
    fn mul_binomial(&mut self, sign: i64, k: i64) {
        let shifted = self.mul_root(k);
        for (a, b) in self.c.iter_mut().zip(&shifted.c) {
            if sign >= 0 {
                *a += b;
            } else {
                *a -= b;
            }
        }
    }

    fn add_assign(&mut self, other: &IntPoly) {
        for (a, b) in self.c.iter_mut().zip(&other.c) {
            *a += b;
        }
    }

    fn scale(&mut self, s: i64) {
        let s = BigInt::from(s);
        for a in self.c.iter_mut() {
            *a *= &s;
        }
    }

    /// Reduce modulo the monic integer polynomial `g` in place, keeping
    /// the vector length (high coefficients become zero). Shrinking both
    /// factors below `phi(n)` before a product cuts its cost by the
    /// square of the ratio.
    fn reduce(&mut self, g: &[BigInt]) {
        let dg = g.len() - 1;
        for top in (dg..self.n).rev() {
            if self.c[top].is_zero() {
                continue;
            }
            let lead = core::mem::replace(&mut self.c[top], BigInt::zero());
            let shift = top - dg;
            for (i, gc) in g[..dg].iter().enumerate() {
                if !gc.is_zero() {
                    self.c[shift + i] -= &lead * gc;
                }
            }
        }
    }

    /// Full cyclic convolution.
    fn mul(&self, other: &IntPoly) -> IntPoly {
        let mut out = Self::zero(self.n as u64);
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.c.iter().enumerate() {
                if !b.is_zero() {
                    out.c[(i + j) % self.n] += a * b;
                }
            }
        }
        out
    }

    /// Convert to a rational coefficient vector scaled by `num/den`.
    fn to_zeta_poly(&self, num: i64, den: i64) -> ZetaPoly {
        let s = rat(num, den);
        let coeffs: alloc::vec::Vec<BigRat> = self
            .c
            .iter()
            .map(|a| BigRat::from_integer(a.clone()) * &s)
            .collect();
        ZetaPoly::from_coeffs(self.n as u64, coeffs)
    }
}

/// `f_C(a/c) = zeta_{24c}^a * sigma(zeta_c^a)` via the terminating
/// Eulerian form of `sigma`, kept as an unreduced `ZetaPoly` so callers
/// combining several values can canonicalize once at the end.
fn eval_fc_poly(x: &QPoint) -> ZetaPoly {
    let c = x.denom();
    let a = amod(x.numer(), c);
    let minus_one = rat_int(-1);

    // sigma(q) = 1 + sum_{n=0}^{c-1} (-1)^n q^(n+1) (1-q)...(1-q^n)
    let mut acc = ZetaPoly::from_rational(c, BigRat::one());
    let mut prod = ZetaPoly::from_rational(c, BigRat::one());
    for n in 0..c as i64 {
        if n >= 1 {
            prod.mul_binomial(&minus_one, expm(a, n, c));
        }
        let mut term = prod.mul_root(expm(a, n + 1, c));
        term.scale(&rat_int(if n % 2 == 0 { 1 } else { -1 }));
        acc.add_assign(&term);
    }

    let a24 = amod(x.numer(), 24 * c);
    acc.lift(24 * c).mul_root(a24)
}

/// `f_C` at a rational point as a canonical cyclotomic number.
pub fn eval_fc(x: &QPoint) -> QValue {
    QValue::new(eval_fc_poly(x).to_cyc())
}

/// Independent oracle for `f_C` through the dual identity
/// `f_C(x) = -q^{1/24} sigma*(q^{-1})` with the terminating dual
/// Eulerian form of `sigma*`.
pub fn eval_fc_dual(x: &QPoint) -> QValue {
    let c = x.denom();
    let a = amod(x.numer(), c);
    let b = -a; // exponent of q^{-1}
    let minus_one = rat_int(-1);

    // sigma*(q^-1) = -2 sum_{n>=0} q^-(n+1) (1-q^-2)...(1-q^-2n);
    // the factor (1 - q^(-2k)) vanishes first at 2k = 0 mod c
    let kill = if c % 2 == 0 { c / 2 } else { c };
    let mut acc = ZetaPoly::zero(c);
    let mut prod = ZetaPoly::from_rational(c, BigRat::one());
    for n in 0..kill as i64 {
        if n >= 1 {
            prod.mul_binomial(&minus_one, expm(b, 2 * n, c));
        }
        let mut term = prod.mul_root(expm(b, n + 1, c));
        term.scale(&rat_int(-2));
        acc.add_assign(&term);
    }

    let a24 = amod(x.numer(), 24 * c);
    QValue::new(acc.lift(24 * c).mul_root(a24).to_cyc().neg())
}

/// `f_L` on `S_0 \cup S_oo` as an unreduced `ZetaPoly`: `q^{1/8} W_1(q)`
/// at odd denominators and `q^{1/8} W_2(q^{-1})` at denominators
/// divisible by 4. Points over the cusp 1/2 are outside the domain.
fn eval_fl_poly(x: &QPoint) -> Result<ZetaPoly> {
    let c = x.denom();
    let a = amod(x.numer(), c);

    // running fraction: p_acc / d_acc tracks the partial sums, with
    // d_acc the product of all denominator factors so far; the division
    // is resolved in closed form at the end
    let mut p_acc = IntPoly::one(c);
    let mut d_acc = IntPoly::one(c);
    let mut num = IntPoly::one(c);
    let mut shift_sum: i64 = 0;

    if c % 2 == 1 {
        // W1 alternate form: sum_n (q;q^2)_n (-q)^n / (-q^2;q^2)_n;
        // the factor (1 - q^(2n-1)) vanishes first at n = (c+1)/2
        for n in 1..=(c as i64 - 1) / 2 {
            num.mul_binomial(-1, expm(a, 2 * n - 1, c));
            let mut term = num.mul_root(expm(a, n, c));
            term.scale(if n % 2 == 0 { 1 } else { -1 });
            let shift = expm(a, 2 * n, c);
            shift_sum = (shift_sum + shift) % c as i64;
            d_acc.mul_binomial(1, shift);
            p_acc.mul_binomial(1, shift);
            p_acc.add_assign(&term);
        }
    } else if c % 4 == 0 {
        // W2(q^-1) = sum_{n>=1} (-1;q^-2)_n (-q^-1)^n / (q^-1;q^-2)_n;
        // the numerator factor (1 + q^(-2(n-1))) vanishes at n-1 = c/4
        let b = -a;
        p_acc = IntPoly::zero(c);
        for n in 1..=(c as i64) / 4 {
            if n == 1 {
                num.scale(2);
            } else {
                num.mul_binomial(1, expm(b, 2 * (n - 1), c));
            }
            let mut term = num.mul_root(expm(b, n, c));
            term.scale(if n % 2 == 0 { 1 } else { -1 });
            let shift = expm(b, 2 * n - 1, c);
            shift_sum = (shift_sum + shift) % c as i64;
            d_acc.mul_binomial(-1, shift);
            p_acc.mul_binomial(-1, shift);
            p_acc.add_assign(&term);
        }
    } else {
        return Err(Error::DomainError(alloc::format!(
            "{} lies over the cusp 1/2",
            x.value()
        )));
    }

    // The denominator D is a product of binomials over a half-system of
    // residues, so its inverse is a unit multiple of D itself:
    // odd c: D * zeta^-s D = prod over all nonzero t of (1 + zeta^t) = 1;
    // 4 | c: D * (-1)^(c/4) zeta^-s D = prod over odd t of (1 - zeta^t) = 2
    // (s the sum of the used exponents). No polynomial inversion needed.
    let mut inv_den = d_acc.mul_root((-shift_sum).rem_euclid(c as i64));
    let phi_c = crate::cyclotomic::cyclotomic_poly(c);
    p_acc.reduce(&phi_c);
    inv_den.reduce(&phi_c);
    let (s_num, s_den) = if c % 2 == 1 {
        (1, 1)
    } else {
        (if (c / 4) % 2 == 0 { 1 } else { -1 }, 2)
    };
    let w = p_acc.mul(&inv_den).to_zeta_poly(s_num, s_den);
    let a8 = amod(x.numer(), 8 * c);
    Ok(w.lift(8 * c).mul_root(a8))
}

/// `f_L` at a rational point as a canonical cyclotomic number.
pub fn eval_fl(x: &QPoint) -> Result<QValue> {
    Ok(QValue::new(eval_fl_poly(x)?.to_cyc()))
}

fn eval_form(form: FormKind, x: &QPoint) -> Result<QValue> {
    match form {
        FormKind::FC => Ok(eval_fc(x)),
        FormKind::FL => eval_fl(x),
    }
}

fn eval_form_poly(form: FormKind, x: &QPoint) -> Result<ZetaPoly> {
    match form {
        FormKind::FC => Ok(eval_fc_poly(x)),
        FormKind::FL => eval_fl_poly(x),
    }
}

fn check_prime(form: FormKind, p: u64) -> Result<()> {
    let ok = numth::is_prime(p)
        && match form {
            FormKind::FC => p >= 5,
            FormKind::FL => p >= 3,
        };
    if !ok {
        return Err(Error::BadPrime(p as i64));
    }
    Ok(())
}

/// The Hecke operator `T_p^oo` applied to `f_C` or `f_L` at `x`: the
/// `p + 1`-term combination of values at `+-px` and `(+-x + j)/p`, with
/// the reflected branch chosen by `p mod 6` (`f_C`) or `p mod 4` (`f_L`).
pub fn hecke_qmf(form: FormKind, p: u64, x: &QPoint) -> Result<QValue> {
    check_prime(form, p)?;
    let (root_order, reflect, sign_exp) = match form {
        FormKind::FC => (24u64, p % 6 == 5, (p * p - 1) / 24),
        FormKind::FL => (8u64, p % 4 == 3, 0),
    };
    let x0 = if reflect { -x.value() } else { x.value().clone() };
    let pr = rat_int(p as i64);

    // every term lives in Q(zeta_{root_order * c_j}) with c_j | p c, so
    // accumulate unreduced at the common order and canonicalize once
    let m = root_order * p * x.denom();
    let scaled = eval_form_poly(form, &QPoint::new(&x0 * &pr))?;
    let mut acc = scaled.lift(m);
    if sign_exp % 2 == 1 {
        acc.scale(&rat_int(-1));
    }

    let mut inner = ZetaPoly::zero(m);
    for j in 0..p as i64 {
        let xj = QPoint::new((&x0 + rat_int(j)) / &pr);
        let fj = eval_form_poly(form, &xj)?;
        let phase = (-((p as i64) * j)).rem_euclid(root_order as i64) * (m / root_order) as i64;
        inner.add_assign(&fj.lift(m).mul_root(phase));
    }
    inner.scale(&rat(1, p as i64));
    acc.add_assign(&inner);
    Ok(QValue::new(acc.to_cyc()))
}

/// The cocycle `h_gamma(x) = f(x) - nu(gamma)^{-1} |cx+d|^{-1} f(gamma x)`
/// attached to the form's multiplier system.
pub fn cocycle(form: FormKind, gamma: &Mat2, x: &QPoint) -> Result<QValue> {
    let (level, nu) = match form {
        FormKind::FC => (2, MultiplierSystem::nu_c()),
        FormKind::FL => (4, MultiplierSystem::nu_l()),
    };
    if !gamma0_member(gamma, level) {
        return Err(Error::NotInGroup(gamma.to_string()));
    }
    let t = &gamma.c * x.value() + &gamma.d;
    if t.is_zero() {
        return Err(Error::PoleError(x.value().to_string()));
    }
    let gx = QPoint::new((&gamma.a * x.value() + &gamma.b) / &t);
    let fx = eval_form(form, x)?;
    let fgx = eval_form(form, &gx)?;
    let nu_inv = nu_eval(&nu, gamma)?.inverse().expect("roots of unity are units");
    let jac = t.abs().recip();
    Ok(QValue::new(fx.exact.sub(&nu_inv.mul(&fgx.exact).scale(&jac))))
}

/// The cocycle of the Hecke-transformed form `T_p^oo f`, with the same
/// multiplier system as `f`. For eigenvalues `lambda` this equals
/// `lambda` times the plain cocycle, exactly.
pub fn hecke_cocycle(form: FormKind, p: u64, gamma: &Mat2, x: &QPoint) -> Result<QValue> {
    let (level, nu) = match form {
        FormKind::FC => (2, MultiplierSystem::nu_c()),
        FormKind::FL => (4, MultiplierSystem::nu_l()),
    };
    if !gamma0_member(gamma, level) {
        return Err(Error::NotInGroup(gamma.to_string()));
    }
    let t = &gamma.c * x.value() + &gamma.d;
    if t.is_zero() {
        return Err(Error::PoleError(x.value().to_string()));
    }
    let gx = QPoint::new((&gamma.a * x.value() + &gamma.b) / &t);
    let fx = hecke_qmf(form, p, x)?;
    let fgx = hecke_qmf(form, p, &gx)?;
    let nu_inv = nu_eval(&nu, gamma)?.inverse().expect("roots of unity are units");
    let jac = t.abs().recip();
    Ok(QValue::new(fx.exact.sub(&nu_inv.mul(&fgx.exact).scale(&jac))))
}

/// The root-of-unity identity for `+-T_C(+-p)`:
/// `(-1)^((p^2-1)/24) + (1/2p) sum_j sum_n (-1)^n
///  zeta_p^((n+1-(p^2-1)/24) j) (1-zeta_p^j)...(1-zeta_p^(nj))`,
/// evaluated exactly in `Q(zeta_p)` and returned as the integer it
/// provably is.
pub fn identity_tc(p: u64) -> Result<i64> {
    check_prime(FormKind::FC, p)?;
    let e = ((p * p - 1) / 24) as i64;
    let minus_one = rat_int(-1);
    let mut total = ZetaPoly::zero(p);
    for j in 0..p as i64 {
        let mut prod = ZetaPoly::from_rational(p, BigRat::one());
        for n in 0..p as i64 {
            if n >= 1 {
                prod.mul_binomial(&minus_one, expm(j, n, p));
            }
            let mut term = prod.mul_root(expm(j, n + 1 - e, p));
            term.scale(&rat_int(if n % 2 == 0 { 1 } else { -1 }));
            total.add_assign(&term);
        }
    }
    total.scale(&rat(1, 2 * p as i64));
    let sign = if e % 2 == 0 { 1 } else { -1 };
    let value = CycNumber::from_int(sign).add(&total.to_cyc());
    Ok(i64::try_from(value.as_integer()?).unwrap())
}

/// The root-of-unity identity for `+-T_L(+-p)`:
/// `1 + (1/p) sum_j zeta_p^(-(p^2-1)/8 j) sum_{n<=(p-1)/2}
///  (1-zeta_p^j)(1-zeta_p^(3j))...(-zeta_p^j)^n / ((1+zeta_p^(2j))...)`,
/// with each inner quotient evaluated by a running fraction and one
/// exact cyclotomic inversion per `j`.
pub fn identity_tl(p: u64) -> Result<i64> {
    check_prime(FormKind::FL, p)?;
    let e = ((p * p - 1) / 8) as i64;
    let one = rat_int(1);
    let minus_one = rat_int(-1);
    let mut total = CycNumber::zero();
    for j in 0..p as i64 {
        let mut p_acc = ZetaPoly::from_rational(p, BigRat::one());
        let mut d_acc = ZetaPoly::from_rational(p, BigRat::one());
        let mut num = ZetaPoly::from_rational(p, BigRat::one());
        for n in 1..=(p as i64 - 1) / 2 {
            num.mul_binomial(&minus_one, expm(j, 2 * n - 1, p));
            let mut term = num.mul_root(expm(j, n, p));
            term.scale(&rat_int(if n % 2 == 0 { 1 } else { -1 }));
            let shift = expm(j, 2 * n, p);
            d_acc.mul_binomial(&one, shift);
            let mut p_next = p_acc;
            p_next.mul_binomial(&one, shift);
            p_next.add_assign(&term);
            p_acc = p_next;
        }
        let den = d_acc
            .to_cyc()
            .inverse()
            .expect("1 + zeta_p^(2kj) is nonzero for odd p");
        let inner = p_acc.to_cyc().mul(&den);
        let phase = CycNumber::root(p, (-e * j).rem_euclid(p as i64));
        total = total.add(&phase.mul(&inner));
    }
    let value = CycNumber::one().add(&total.scale(&rat(1, p as i64)));
    Ok(i64::try_from(value.as_integer()?).unwrap())
}
