//! Truncated exact q-series and the particular series of both families.
//!
//! A `TruncSeries` holds rational coefficients for `q^0 .. q^(order-1)`
//! together with a symbolic fractional leading exponent (such as `1/24`)
//! that is never expanded numerically. All arithmetic is exact up to the
//! truncation order.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::rational::{rat_int, BigRat};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncSeries {
    /// symbolic prefactor exponent: the series stands for `q^lead * sum`
    pub lead: BigRat,
    /// coefficient of `q^k` at index `k`; length is the truncation order
    pub coeffs: Vec<BigRat>,
}

impl TruncSeries {
    pub fn zero(order: usize) -> Self {
        TruncSeries {
            lead: BigRat::zero(),
            coeffs: alloc::vec![BigRat::zero(); order],
        }
    }

    pub fn one(order: usize) -> Self {
        let mut s = TruncSeries::zero(order);
        s.coeffs[0] = BigRat::one();
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeff(&self, k: usize) -> BigRat {
        self.coeffs.get(k).cloned().unwrap_or_else(BigRat::zero)
    }

    pub fn with_lead(mut self, lead: BigRat) -> Self {
        self.lead = lead;
        self
    }

    pub fn add_assign(&mut self, other: &TruncSeries) {
        assert_eq!(self.lead, other.lead, "mismatched leading exponents");
        for (i, c) in other.coeffs.iter().enumerate().take(self.coeffs.len()) {
            self.coeffs[i] += c;
        }
    }

    pub fn scale(&mut self, c: &BigRat) {
        for x in &mut self.coeffs {
            *x *= c;
        }
    }

    /// Multiply by the monomial `c * q^k` (truncating at the far end).
    pub fn mul_monomial(&mut self, c: &BigRat, k: usize) {
        let n = self.coeffs.len();
        for i in (0..n).rev() {
            self.coeffs[i] = if i >= k {
                &self.coeffs[i - k] * c
            } else {
                BigRat::zero()
            };
        }
    }

    /// Multiply by `1 + c * q^k`, `k >= 1`; linear time in the order.
    pub fn mul_binomial(&mut self, c: &BigRat, k: usize) {
        assert!(k >= 1);
        let n = self.coeffs.len();
        for i in (k..n).rev() {
            let add = &self.coeffs[i - k] * c;
            self.coeffs[i] += add;
        }
    }

    /// Divide by `1 + c * q^k`, `k >= 1`; linear time in the order.
    pub fn div_binomial(&mut self, c: &BigRat, k: usize) {
        assert!(k >= 1);
        for i in k..self.coeffs.len() {
            let sub = &self.coeffs[i - k] * c;
            self.coeffs[i] -= sub;
        }
    }

    pub fn mul(&self, other: &TruncSeries) -> TruncSeries {
        let n = self.coeffs.len().min(other.coeffs.len());
        let mut out = TruncSeries::zero(n);
        out.lead = &self.lead + &other.lead;
        for i in 0..n {
            if self.coeffs[i].is_zero() {
                continue;
            }
            for j in 0..n - i {
                if other.coeffs[j].is_zero() {
                    continue;
                }
                let add = &self.coeffs[i] * &other.coeffs[j];
                out.coeffs[i + j] += add;
            }
        }
        out
    }

    /// Power-series division; `other` must have a nonzero constant term.
    pub fn div(&self, other: &TruncSeries) -> TruncSeries {
        assert!(!other.coeffs[0].is_zero(), "divisor is not a unit");
        let n = self.coeffs.len().min(other.coeffs.len());
        let mut out = TruncSeries::zero(n);
        out.lead = &self.lead - &other.lead;
        for k in 0..n {
            let mut acc = self.coeff(k);
            for i in 0..k {
                if out.coeffs[i].is_zero() {
                    continue;
                }
                acc -= &out.coeffs[i] * &other.coeffs[k - i];
            }
            out.coeffs[k] = acc / &other.coeffs[0];
        }
        out
    }
}

/// `sigma(q) = 1 + sum_{n>=0} (-1)^n q^(n+1) (1-q)(1-q^2)...(1-q^n)`,
/// the terminating Eulerian form.
pub fn series_sigma(order: usize) -> TruncSeries {
    let mut out = TruncSeries::one(order);
    let minus_one = rat_int(-1);
    let mut prod = TruncSeries::one(order);
    let mut n = 0usize;
    while n + 1 < order {
        if n >= 1 {
            prod.mul_binomial(&minus_one, n);
        }
        let mut term = prod.clone();
        term.mul_monomial(&rat_int(if n % 2 == 0 { 1 } else { -1 }), n + 1);
        out.add_assign(&term);
        n += 1;
    }
    out
}

/// `sigma*(q) = 2 sum_{n>=1} (-1)^n q^(n^2) / ((1-q)(1-q^3)...(1-q^(2n-1)))`.
pub fn series_sigma_star(order: usize) -> TruncSeries {
    let mut out = TruncSeries::zero(order);
    let minus_one = rat_int(-1);
    let mut inv = TruncSeries::one(order);
    let mut n = 1usize;
    while n * n < order {
        inv.div_binomial(&minus_one, 2 * n - 1);
        let mut term = inv.clone();
        let c = rat_int(if n % 2 == 0 { 2 } else { -2 });
        term.mul_monomial(&c, n * n);
        out.add_assign(&term);
        n += 1;
    }
    out
}

/// Terminating dual Eulerian form
/// `sigma*(q) = -2 sum_{n>=0} q^(n+1) (1-q^2)(1-q^4)...(1-q^(2n))`.
pub fn series_sigma_star_dual(order: usize) -> TruncSeries {
    let mut out = TruncSeries::zero(order);
    let minus_one = rat_int(-1);
    let mut prod = TruncSeries::one(order);
    let mut n = 0usize;
    while n + 1 < order {
        if n >= 1 {
            prod.mul_binomial(&minus_one, 2 * n);
        }
        let mut term = prod.clone();
        term.mul_monomial(&rat_int(-2), n + 1);
        out.add_assign(&term);
        n += 1;
    }
    out
}

/// The indefinite-theta form of `sigma`:
/// `sum_{n>=0} sum_{|j|<=n} (-1)^(n+j) q^(n(3n+1)/2 - j^2) (1 - q^(2n+1))`.
pub fn series_sigma_adh(order: usize) -> TruncSeries {
    let mut out = TruncSeries::zero(order);
    let mut n = 0usize;
    while n * (n + 1) / 2 < order {
        for j in -(n as i64)..=(n as i64) {
            let e = n * (3 * n + 1) / 2 - (j * j) as usize;
            let sign = if (n as i64 + j) % 2 == 0 { 1 } else { -1 };
            if e < order {
                out.coeffs[e] += rat_int(sign);
            }
            let e2 = e + 2 * n + 1;
            if e2 < order {
                out.coeffs[e2] -= rat_int(sign);
            }
        }
        n += 1;
    }
    out
}

/// Which of the Li-Ngo-Rhoades series to build.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WKind {
    W1,
    W2,
    W1Alt,
}

/// `W1(q) = sum_n (q;q)_n (-1)^n q^(n(n+1)/2) / (-q;q)_n`,
/// `W2(q) = sum_{n>=1} (-1;q^2)_n (-q)^n / (q;q^2)_n`, and the alternate
/// form `W1(q) = sum_n (q;q^2)_n (-q)^n / (-q^2;q^2)_n`.
pub fn series_w(which: WKind, order: usize) -> TruncSeries {
    let one = rat_int(1);
    let minus_one = rat_int(-1);
    match which {
        WKind::W1 => {
            let mut out = TruncSeries::zero(order);
            let mut frac = TruncSeries::one(order);
            let mut n = 0usize;
            while n * (n + 1) / 2 < order {
                if n >= 1 {
                    frac.mul_binomial(&minus_one, n);
                    frac.div_binomial(&one, n);
                }
                let mut term = frac.clone();
                let c = rat_int(if n % 2 == 0 { 1 } else { -1 });
                term.mul_monomial(&c, n * (n + 1) / 2);
                out.add_assign(&term);
                n += 1;
            }
            out
        }
        WKind::W2 => {
            let mut out = TruncSeries::zero(order);
            let mut frac = TruncSeries::one(order);
            for n in 1..order {
                // (-1; q^2)_n gains (1 + q^(2n-2)), which is 2 at n = 1
                if n == 1 {
                    frac.scale(&rat_int(2));
                } else {
                    frac.mul_binomial(&one, 2 * n - 2);
                }
                frac.div_binomial(&minus_one, 2 * n - 1);
                let mut term = frac.clone();
                term.mul_monomial(&rat_int(if n % 2 == 0 { 1 } else { -1 }), n);
                out.add_assign(&term);
            }
            out
        }
        WKind::W1Alt => {
            let mut out = TruncSeries::zero(order);
            let mut frac = TruncSeries::one(order);
            for n in 0..order {
                if n >= 1 {
                    frac.mul_binomial(&minus_one, 2 * n - 1);
                    frac.div_binomial(&one, 2 * n);
                }
                let mut term = frac.clone();
                term.mul_monomial(&rat_int(if n % 2 == 0 { 1 } else { -1 }), n);
                out.add_assign(&term);
            }
            out
        }
    }
}

/// Coefficients `T_C(n)` for signed `n = 1 mod 24` read off
/// `phi(q) = q^(1/24) sigma(q) + q^(-1/24) sigma*(q)`: `n = 24k+1 > 0`
/// from `sigma`, `n = -(24k-1) < 0` from `sigma*`.
pub fn combine_phi(order: usize) -> BTreeMap<i64, BigRat> {
    let sigma = series_sigma(order);
    let star = series_sigma_star(order);
    let mut out = BTreeMap::new();
    for k in 0..order {
        out.insert(24 * k as i64 + 1, sigma.coeff(k));
        if k >= 1 {
            out.insert(-(24 * k as i64 - 1), star.coeff(k));
        }
    }
    out
}

/// Coefficients `T_L(n)` for odd signed `n = 1 mod 8` read off
/// `q W1(q^8) + q^(-1) W2(q^8)`: `n = 8k+1 > 0` from `W1`,
/// `n = -(8k-1) < 0` from `W2`.
pub fn combine_w(order: usize) -> BTreeMap<i64, BigRat> {
    let w1 = series_w(WKind::W1, order);
    let w2 = series_w(WKind::W2, order);
    let mut out = BTreeMap::new();
    for k in 0..order {
        out.insert(8 * k as i64 + 1, w1.coeff(k));
        if k >= 1 {
            out.insert(-(8 * k as i64 - 1), w2.coeff(k));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn ints(s: &TruncSeries, n: usize) -> Vec<i64> {
        (0..n)
            .map(|k| {
                let c = s.coeff(k);
                assert!(c.is_integer());
                i64::try_from(c.to_integer()).unwrap()
            })
            .collect()
    }

    #[test]
    fn arithmetic() {
        let mut a = TruncSeries::one(6);
        a.mul_binomial(&rat_int(1), 1); // 1 + q
        let b = a.clone().mul(&a); // (1+q)^2
        assert_eq!(ints(&b, 4), alloc::vec![1, 2, 1, 0]);
        let c = b.div(&a);
        assert_eq!(ints(&c, 4), alloc::vec![1, 1, 0, 0]);
        let mut g = TruncSeries::one(8);
        g.div_binomial(&rat_int(-1), 1); // 1/(1-q)
        assert_eq!(ints(&g, 5), alloc::vec![1, 1, 1, 1, 1]);
        let mut h = TruncSeries::one(4);
        h.scale(&rat(1, 2));
        assert_eq!(h.coeff(0), rat(1, 2));
    }

    #[test]
    fn sigma_expansion() {
        let s = series_sigma(60);
        assert_eq!(ints(&s, 4), alloc::vec![1, 1, -1, 2]);
        assert_eq!(s.coeff(45), rat_int(4));
    }

    #[test]
    fn sigma_matches_adh_form() {
        let n = 400;
        assert_eq!(series_sigma(n).coeffs, series_sigma_adh(n).coeffs);
    }

    #[test]
    fn sigma_star_forms_agree() {
        let n = 300;
        assert_eq!(
            series_sigma_star(n).coeffs,
            series_sigma_star_dual(n).coeffs
        );
        let s = series_sigma_star(10);
        assert_eq!(ints(&s, 3), alloc::vec![0, -2, -2]);
    }

    #[test]
    fn w_expansions() {
        let w1 = series_w(WKind::W1, 30);
        assert_eq!(ints(&w1, 7), alloc::vec![1, -1, 2, -1, 0, -2, 3]);
        let w2 = series_w(WKind::W2, 30);
        assert_eq!(ints(&w2, 10), alloc::vec![0, -2, 0, -2, 2, 0, 2, 0, 2, -2]);
        let alt = series_w(WKind::W1Alt, 120);
        assert_eq!(series_w(WKind::W1, 120).coeffs, alt.coeffs);
    }

    #[test]
    fn combined_maps() {
        let phi = combine_phi(5);
        assert_eq!(phi[&1], rat_int(1));
        assert_eq!(phi[&25], rat_int(1));
        assert_eq!(phi[&-23], rat_int(-2));
        let w = combine_w(5);
        assert_eq!(w[&1], rat_int(1));
        assert_eq!(w[&9], rat_int(-1));
        assert_eq!(w[&-7], rat_int(-2));
    }
}
