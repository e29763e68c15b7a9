//! Exact 2x2 matrix algebra and the combinatorics of `Gamma_0(N)`.
//!
//! Provides membership tests, decomposition into generator words at levels
//! 2 and 4 (Euclidean descent on the first column), generator computation
//! for arbitrary `Gamma_0(N)` by Schreier's method, cusp classification,
//! and the Hecke coset representatives `beta_j`, `beta_oo`.

use alloc::string::ToString;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::numth;
use crate::rational::{rat_int, round_nearest_ties_to_zero, BigRat};

/// A 2x2 matrix with exact rational entries and positive determinant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mat2 {
    pub a: BigRat,
    pub b: BigRat,
    pub c: BigRat,
    pub d: BigRat,
}

impl fmt::Display for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} {}; {} {})", self.a, self.b, self.c, self.d)
    }
}

impl Mat2 {
    pub fn new(a: BigRat, b: BigRat, c: BigRat, d: BigRat) -> Self {
        Mat2 { a, b, c, d }
    }

    pub fn from_i64(a: i64, b: i64, c: i64, d: i64) -> Self {
        Mat2::new(rat_int(a), rat_int(b), rat_int(c), rat_int(d))
    }

    pub fn identity() -> Self {
        Mat2::from_i64(1, 0, 0, 1)
    }

    pub fn neg(&self) -> Self {
        Mat2::new(-&self.a, -&self.b, -&self.c, -&self.d)
    }

    pub fn det(&self) -> BigRat {
        &self.a * &self.d - &self.b * &self.c
    }

    pub fn is_integral(&self) -> bool {
        self.a.is_integer() && self.b.is_integer() && self.c.is_integer() && self.d.is_integer()
    }

    /// `T^n = (1 n; 0 1)`.
    pub fn t_pow(n: &BigInt) -> Self {
        Mat2::new(
            BigRat::one(),
            BigRat::from_integer(n.clone()),
            BigRat::zero(),
            BigRat::one(),
        )
    }

    /// `R^m` at the given level: `(1 0; k*m 1)` with `k = level`.
    pub fn r_pow(level: u64, m: &BigInt) -> Self {
        Mat2::new(
            BigRat::one(),
            BigRat::zero(),
            BigRat::from_integer(m * BigInt::from(level)),
            BigRat::one(),
        )
    }

    /// `alpha_p = (1 0; 0 p)`.
    pub fn alpha(p: u64) -> Self {
        Mat2::from_i64(1, 0, 0, p as i64)
    }
}

pub fn mat_mul(g: &Mat2, h: &Mat2) -> Mat2 {
    Mat2::new(
        &g.a * &h.a + &g.b * &h.c,
        &g.a * &h.b + &g.b * &h.d,
        &g.c * &h.a + &g.d * &h.c,
        &g.c * &h.b + &g.d * &h.d,
    )
}

pub fn mat_inv(g: &Mat2) -> Mat2 {
    let det = g.det();
    Mat2::new(
        &g.d / &det,
        -&g.b / &det,
        -&g.c / &det,
        &g.a / &det,
    )
}

/// A point of `P^1(Q)` in normal form: coprime integers `(a : c)` with
/// `c >= 0`, and `(1 : 0)` for the point at infinity.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ProjPoint {
    pub a: BigInt,
    pub c: BigInt,
}

impl fmt::Display for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.c.is_zero() {
            write!(f, "oo")
        } else if self.c.is_one() {
            write!(f, "{}", self.a)
        } else {
            write!(f, "{}/{}", self.a, self.c)
        }
    }
}

impl ProjPoint {
    pub fn new(a: BigInt, c: BigInt) -> Self {
        if a.is_zero() && c.is_zero() {
            panic!("(0 : 0) is not a projective point");
        }
        let g = num_integer::Integer::gcd(&a, &c);
        let (mut a, mut c) = (a / &g, c / g);
        let flip = if c.is_zero() {
            a.is_negative()
        } else {
            c.is_negative()
        };
        if flip {
            a = -a;
            c = -c;
        }
        ProjPoint { a, c }
    }

    pub fn infinity() -> Self {
        ProjPoint {
            a: BigInt::one(),
            c: BigInt::zero(),
        }
    }

    pub fn from_rational(x: &BigRat) -> Self {
        ProjPoint::new(x.numer().clone(), x.denom().clone())
    }

    pub fn from_i64(a: i64, c: i64) -> Self {
        ProjPoint::new(BigInt::from(a), BigInt::from(c))
    }

    pub fn is_infinity(&self) -> bool {
        self.c.is_zero()
    }

    pub fn to_rational(&self) -> Option<BigRat> {
        if self.is_infinity() {
            None
        } else {
            Some(BigRat::new(self.a.clone(), self.c.clone()))
        }
    }
}

/// Möbius action of `g` on `P^1(Q)`.
pub fn mat_act(g: &Mat2, x: &ProjPoint) -> ProjPoint {
    let xa = BigRat::from_integer(x.a.clone());
    let xc = BigRat::from_integer(x.c.clone());
    let num = &g.a * &xa + &g.b * &xc;
    let den = &g.c * &xa + &g.d * &xc;
    // clear the rational scaling: (num : den) with a common denominator
    let scale = BigRat::from_integer(num.denom() * den.denom());
    let num = (&num * &scale).to_integer();
    let den = (&den * &scale).to_integer();
    ProjPoint::new(num, den)
}

/// Möbius action on a point `x + iy` of the upper half plane, in doubles.
pub fn mat_act_complex(g: &Mat2, x: f64, y: f64) -> (f64, f64) {
    let a = crate::approx::rat_to_f64(&g.a);
    let b = crate::approx::rat_to_f64(&g.b);
    let c = crate::approx::rat_to_f64(&g.c);
    let d = crate::approx::rat_to_f64(&g.d);
    // (az + b)/(cz + d) with z = x + iy
    let dr = c * x + d;
    let di = c * y;
    let nr = a * x + b;
    let ni = a * y;
    let q = dr * dr + di * di;
    ((nr * dr + ni * di) / q, (ni * dr - nr * di) / q)
}

/// True iff `g` has integer entries, `det = 1`, and lower-left entry
/// divisible by `n`.
pub fn gamma0_member(g: &Mat2, n: u64) -> bool {
    if !g.is_integral() || !g.det().is_one() {
        return false;
    }
    (g.c.to_integer() % BigInt::from(n)).is_zero()
}

/// The generator letters available at levels 2 and 4.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Letter {
    T,
    R,
}

/// A word in the generators `T`, `R` of `Gamma_0(level)` together with a
/// global sign; reconstructs to `sign * prod letters`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenWord {
    pub level: u64,
    pub letters: Vec<(Letter, BigInt)>,
    pub sign: i8,
}

impl GenWord {
    pub fn reconstruct(&self) -> Mat2 {
        let mut g = Mat2::identity();
        for (letter, e) in &self.letters {
            let step = match letter {
                Letter::T => Mat2::t_pow(e),
                Letter::R => Mat2::r_pow(self.level, e),
            };
            g = mat_mul(&g, &step);
        }
        if self.sign < 0 {
            g.neg()
        } else {
            g
        }
    }

    /// Sum of all exponents over both letters. This determines the value
    /// of the multiplier systems of levels 2 and 4 on the word.
    pub fn exponent_sum(&self) -> BigInt {
        self.letters.iter().map(|(_, e)| e).sum()
    }
}

/// Writes `g` in `Gamma_0(level)`, `level` 2 or 4, as a signed word in
/// `T = (1 1; 0 1)` and `R = (1 0; level 1)`.
///
/// Euclidean descent on the first column: a `T` step shrinks the top
/// entry below half the bottom one, then an `R` step shrinks the bottom
/// entry. Ties in the nearest-integer choices round toward zero.
pub fn decompose_word(g: &Mat2, level: u64) -> Result<GenWord> {
    assert!(level == 2 || level == 4, "levels 2 and 4 only");
    if !gamma0_member(g, level) {
        return Err(Error::NotInGroup(g.to_string()));
    }
    let k = BigInt::from(level);
    let mut cur = g.clone();
    let mut letters: Vec<(Letter, BigInt)> = Vec::new();
    loop {
        let a = cur.a.to_integer();
        let c = cur.c.to_integer();
        if c.is_zero() {
            break;
        }
        let n = round_nearest_ties_to_zero(&BigRat::new(a.clone(), c.clone()));
        if !n.is_zero() {
            // g = T^n * (T^-n g); record T^n, continue with the product
            cur = mat_mul(&Mat2::t_pow(&(-&n)), &cur);
            letters.push((Letter::T, n));
        }
        let a = cur.a.to_integer();
        let c = cur.c.to_integer();
        if c.is_zero() {
            break;
        }
        let m = round_nearest_ties_to_zero(&BigRat::new(c.clone(), &k * &a));
        if m.is_zero() {
            // |c| < k|a|/2 yet c != 0 cannot persist for group elements;
            // guard against a non-terminating loop all the same
            return Err(Error::NotInGroup(g.to_string()));
        }
        cur = mat_mul(&Mat2::r_pow(level, &(-&m)), &cur);
        letters.push((Letter::R, m));
    }
    // remainder is +-T^b
    let sign = if cur.a.is_one() {
        1
    } else {
        cur = cur.neg();
        -1
    };
    let b = cur.b.to_integer();
    if !b.is_zero() {
        letters.push((Letter::T, b));
    }
    let word = GenWord {
        level,
        letters,
        sign,
    };
    debug_assert_eq!(&word.reconstruct(), g);
    Ok(word)
}

fn mod_u(x: &BigInt, n: u64) -> u64 {
    let r = x % BigInt::from(n);
    let r = if r.is_negative() { r + BigInt::from(n) } else { r };
    u64::try_from(r).unwrap()
}

/// Canonical label of the `Gamma_0(N)`-coset of a matrix with bottom row
/// `(c, d)`: the lexicographically least unit multiple of `(c, d)` mod `N`.
fn coset_label(c: u64, d: u64, n: u64, units: &[u64]) -> (u64, u64) {
    units
        .iter()
        .map(|&u| ((u * c) % n, (u * d) % n))
        .min()
        .unwrap()
}

/// Generators of `Gamma_0(N)` (including `-I`), by Schreier's lemma over
/// a breadth-first coset transversal in `SL_2(Z)`.
pub fn gamma0_generators(n: u64) -> Vec<Mat2> {
    assert!(n >= 1);
    let s = Mat2::from_i64(0, -1, 1, 0);
    let t = Mat2::from_i64(1, 1, 0, 1);
    let s_inv = mat_inv(&s);
    let t_inv = mat_inv(&t);
    let steps = [&s, &t, &s_inv, &t_inv];

    let units: Vec<u64> = (1..n.max(2)).filter(|&u| numth::gcd(u, n) == 1).collect();
    let label_of = |g: &Mat2| {
        coset_label(
            mod_u(&g.c.to_integer(), n),
            mod_u(&g.d.to_integer(), n),
            n,
            &units,
        )
    };

    let mut transversal: Vec<Mat2> = alloc::vec![Mat2::identity()];
    let mut labels: Vec<(u64, u64)> = alloc::vec![label_of(&Mat2::identity())];
    let mut head = 0;
    while head < transversal.len() {
        let rep = transversal[head].clone();
        for step in steps {
            let next = mat_mul(&rep, step);
            let lbl = label_of(&next);
            if !labels.contains(&lbl) {
                labels.push(lbl);
                transversal.push(next);
            }
        }
        head += 1;
    }

    let mut gens: Vec<Mat2> = alloc::vec![Mat2::identity().neg()];
    for rep in &transversal {
        for step in steps {
            let prod = mat_mul(rep, step);
            let lbl = label_of(&prod);
            let idx = labels.iter().position(|l| *l == lbl).unwrap();
            let schreier = mat_mul(&prod, &mat_inv(&transversal[idx]));
            debug_assert!(gamma0_member(&schreier, n));
            let neg = schreier.neg();
            if schreier != Mat2::identity()
                && neg != Mat2::identity()
                && !gens.contains(&schreier)
                && !gens.contains(&neg)
            {
                gens.push(schreier);
            }
        }
    }
    gens
}

/// The `Gamma_0(level)`-orbit of a cusp, tagged by a canonical
/// representative.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CuspClass {
    pub level: u64,
    pub representative: ProjPoint,
}

impl fmt::Display for CuspClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.representative)
    }
}

/// Canonical cusp list for `Gamma_0(n)`: for each divisor `c` of `n`, the
/// classes `a/c` with `a` running over residues mod `gcd(c, n/c)` coprime
/// to `c`. The divisor `c = n` gives the class of `oo`.
pub fn cusp_list(n: u64) -> Vec<ProjPoint> {
    let mut out = Vec::new();
    for c in numth::divisors(n) {
        if c == n {
            out.push(ProjPoint::infinity());
            continue;
        }
        if c == 1 {
            out.push(ProjPoint::from_i64(0, 1));
            continue;
        }
        let g = numth::gcd(c, n / c);
        for r in (0..g).filter(|&r| numth::gcd(r, g) == 1) {
            // smallest positive a = r mod g with gcd(a, c) = 1
            let mut a = r;
            while a == 0 || numth::gcd(a, c) != 1 {
                a += g;
            }
            out.push(ProjPoint::from_i64(a as i64, c as i64));
        }
    }
    out
}

/// Inverse of `a` modulo `c` (any representative), with the convention
/// `1` when `c <= 1`.
fn inv_mod_cusp(a: &BigInt, c: &BigInt) -> BigInt {
    if c.abs() <= BigInt::one() {
        return BigInt::one();
    }
    let c_u = u64::try_from(c.abs()).expect("cusp denominator fits u64");
    let a_u = mod_u(a, c_u);
    BigInt::from(numth::inv_mod(a_u, c_u).expect("cusp in lowest terms"))
}

/// True iff the cusps `x` and `y` lie in the same `Gamma_0(n)` orbit.
///
/// Criterion: writing the cusps as `a1/c1`, `a2/c2` in lowest terms with
/// `s_i a_i = 1 mod c_i`, the orbits agree iff
/// `s1 c2 = s2 c1 mod gcd(c1 c2, n)`.
pub fn cusp_equivalent(x: &ProjPoint, y: &ProjPoint, n: u64) -> bool {
    let (a1, c1) = (&x.a, &x.c);
    let (a2, c2) = (&y.a, &y.c);
    let s1 = inv_mod_cusp(a1, c1);
    let s2 = inv_mod_cusp(a2, c2);
    let m = num_integer::Integer::gcd(&(c1 * c2), &BigInt::from(n));
    if m.is_zero() {
        // both cusps are oo (n >= 1 makes this unreachable)
        return true;
    }
    ((s1 * c2 - s2 * c1) % m).is_zero()
}

/// The canonical `CuspClass` of `x` under `Gamma_0(n)`.
pub fn cusp_classify(x: &ProjPoint, n: u64) -> CuspClass {
    for rep in cusp_list(n) {
        if cusp_equivalent(x, &rep, n) {
            return CuspClass {
                level: n,
                representative: rep,
            };
        }
    }
    unreachable!("canonical cusp list covers all orbits");
}

/// Coset representatives for the Hecke operator at `p`: the matrices
/// `beta_j = (1 j; 0 p)` for `0 <= j < p` followed by `beta_oo = (p 0; 0 1)`.
pub fn hecke_cosets(p: u64) -> Vec<Mat2> {
    let mut out: Vec<Mat2> = (0..p)
        .map(|j| Mat2::from_i64(1, j as i64, 0, p as i64))
        .collect();
    out.push(Mat2::from_i64(p as i64, 0, 0, 1));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn m(a: i64, b: i64, c: i64, d: i64) -> Mat2 {
        Mat2::from_i64(a, b, c, d)
    }

    #[test]
    fn matrix_algebra() {
        let t = m(1, 1, 0, 1);
        let r2 = m(1, 0, 2, 1);
        assert_eq!(mat_act(&t, &ProjPoint::from_i64(0, 1)), ProjPoint::from_i64(1, 1));
        assert_eq!(mat_act(&r2, &ProjPoint::infinity()), ProjPoint::from_i64(1, 2));
        let rtinv = mat_mul(&r2, &mat_inv(&t));
        let sq = mat_mul(&rtinv, &rtinv);
        assert_eq!(sq, Mat2::identity().neg());
        assert_eq!(mat_mul(&t, &mat_inv(&t)), Mat2::identity());
    }

    #[test]
    fn membership() {
        assert!(gamma0_member(&m(1, 1, 0, 1), 2));
        assert!(!gamma0_member(&m(1, 0, 2, 1), 4));
        assert!(gamma0_member(&m(3, 1, 2, 1), 2));
        assert!(!gamma0_member(&m(2, 0, 0, 2), 2));
        let half = Mat2::new(rat(1, 2), rat(0, 1), rat(0, 1), rat(2, 1));
        assert!(!gamma0_member(&half, 2));
    }

    #[test]
    fn decompose_basic() {
        let id = decompose_word(&Mat2::identity(), 2).unwrap();
        assert!(id.letters.is_empty());
        assert_eq!(id.sign, 1);

        let t5 = decompose_word(&m(1, 5, 0, 1), 2).unwrap();
        assert_eq!(t5.letters, alloc::vec![(Letter::T, BigInt::from(5))]);
        assert_eq!(t5.sign, 1);

        let neg = decompose_word(&Mat2::identity().neg(), 2).unwrap();
        assert_eq!(neg.sign, -1);
        assert!(neg.exponent_sum().is_zero() || {
            let s: BigInt = neg.exponent_sum();
            (s % BigInt::from(24)).is_zero()
        });
        assert_eq!(neg.reconstruct(), Mat2::identity().neg());

        assert!(decompose_word(&m(1, 0, 2, 1), 4).is_err());
    }

    #[test]
    fn decompose_reconstructs() {
        for (mat, level) in [
            (m(3, 1, 2, 1), 2),
            (m(5, 2, 12, 5), 2),
            (m(-7, 3, -26, 11), 2),
            (m(5, 1, 4, 1), 4),
            (m(9, 2, 40, 9), 4),
            (m(-3, -1, 16, 5), 4),
        ] {
            let w = decompose_word(&mat, level).unwrap();
            assert_eq!(w.reconstruct(), mat, "level {level} matrix {mat}");
        }
    }

    #[test]
    fn generators_small_levels() {
        for n in [1u64, 2, 4, 6, 10] {
            let gens = gamma0_generators(n);
            for g in &gens {
                assert!(gamma0_member(g, n), "N={n} gen {g}");
            }
        }
        // level 1 generators reach S and T
        let g1 = gamma0_generators(1);
        assert!(g1.iter().any(|g| *g == m(1, 1, 0, 1) || *g == m(1, -1, 0, 1)));
        // levels 2 and 4: the standard generators decompose over T, R
        assert!(decompose_word(&m(1, 1, 0, 1), 2).is_ok());
        assert!(decompose_word(&m(1, 0, 2, 1), 2).is_ok());
        for g in gamma0_generators(2) {
            assert!(decompose_word(&g, 2).is_ok());
        }
        for g in gamma0_generators(4) {
            assert!(decompose_word(&g, 4).is_ok());
        }
    }

    #[test]
    fn cusps_level4() {
        let reps = cusp_list(4);
        assert_eq!(reps.len(), 3);
        let cls = |a: i64, c: i64| cusp_classify(&ProjPoint::from_i64(a, c), 4).representative;
        assert_eq!(cls(1, 2), ProjPoint::from_i64(1, 2));
        assert_eq!(cls(3, 4), ProjPoint::infinity());
        assert_eq!(cls(1, 3), ProjPoint::from_i64(0, 1));
        assert_eq!(cls(1, 0), ProjPoint::infinity());
        assert_eq!(cls(7, 10), ProjPoint::from_i64(1, 2));
    }

    #[test]
    fn cusp_orbit_invariance() {
        let gamma = m(3, 1, 8, 3);
        assert!(gamma0_member(&gamma, 4));
        for (a, c) in [(1, 0), (0, 1), (1, 2), (3, 4), (2, 5), (5, 6)] {
            let x = ProjPoint::from_i64(a, c);
            let gx = mat_act(&gamma, &x);
            assert_eq!(cusp_classify(&x, 4), cusp_classify(&gx, 4));
        }
    }

    #[test]
    fn hecke_coset_shapes() {
        let c5 = hecke_cosets(5);
        assert_eq!(c5.len(), 6);
        assert_eq!(c5[3], m(1, 3, 0, 5));
        assert_eq!(*c5.last().unwrap(), m(5, 0, 0, 1));
        for g in &c5 {
            assert_eq!(g.det(), rat_int(5));
        }
        assert_eq!(hecke_cosets(2).len(), 3);
    }
}
