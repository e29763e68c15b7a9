//! The weight 1/2 multiplier systems on `Gamma_0(2)` and `Gamma_0(4)`.
//!
//! Both base systems send the generators `T` and `R` to a primitive root
//! of unity (`zeta_24` at level 2, `zeta_8` at level 4), so the value on
//! any group element is the root raised to the total exponent sum of any
//! generator word, and `nu(-I) = 1`. Powers `nu^e` only need `e` mod the
//! root order.

use alloc::string::ToString;
use alloc::vec::Vec;

use num_bigint::BigInt;

use crate::cyclotomic::{cyc_make, CycNumber};
use crate::error::{Error, Result};
use crate::modgroup::{
    decompose_word, gamma0_generators, gamma0_member, mat_inv, mat_mul, Mat2,
};
use crate::rational::rat_int;

/// A power `nu^e` of the base multiplier system of a level.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MultiplierSystem {
    pub level: u64,
    /// exponent of the base system, reduced mod the root order
    pub power: u64,
}

impl MultiplierSystem {
    /// `nu_C`, the base system on `Gamma_0(2)` with `nu(T) = nu(R) = zeta_24`.
    pub fn nu_c() -> Self {
        MultiplierSystem { level: 2, power: 1 }
    }

    /// `nu_L`, the base system on `Gamma_0(4)` with `nu(T) = nu(R) = zeta_8`.
    pub fn nu_l() -> Self {
        MultiplierSystem { level: 4, power: 1 }
    }

    pub fn base(level: u64) -> Self {
        assert!(level == 2 || level == 4, "levels 2 and 4 only");
        MultiplierSystem { level, power: 1 }
    }

    /// The order of the root of unity generating the image: 24 or 8.
    pub fn root_order(&self) -> u64 {
        match self.level {
            2 => 24,
            4 => 8,
            _ => unreachable!(),
        }
    }

    /// `self^e` (e may be negative).
    pub fn pow(&self, e: i64) -> Self {
        let m = self.root_order() as i64;
        let p = (self.power as i64 * e).rem_euclid(m) as u64;
        MultiplierSystem {
            level: self.level,
            power: p,
        }
    }
}

/// Value of the multiplier system on a group element, as an exact root of
/// unity in `Q(zeta_24)` or `Q(zeta_8)`.
pub fn nu_eval(nu: &MultiplierSystem, g: &Mat2) -> Result<CycNumber> {
    let word = decompose_word(g, nu.level)?;
    let m = BigInt::from(nu.root_order());
    let s = word.exponent_sum() * BigInt::from(nu.power);
    let k = i64::try_from(((s % &m) + &m) % m).unwrap();
    Ok(cyc_make(nu.root_order(), k))
}

/// Canonical decomposition `beta = gamma1 * alpha_p * gamma2` of a Hecke
/// coset representative, from the explicit matrix identities of the
/// source lemmas. Returns `(gamma1, gamma2)`.
fn canonical_decomposition(level: u64, p: u64, j: Option<u64>) -> (Mat2, Mat2) {
    match j {
        // beta_j = alpha_p * T^j
        Some(j) => (Mat2::identity(), Mat2::t_pow(&BigInt::from(j))),
        None => {
            let t = |n: i64| Mat2::t_pow(&BigInt::from(n));
            let r = Mat2::r_pow(level, &BigInt::from(1));
            let r_inv = mat_inv(&r);
            match (level, p % 4) {
                // beta_oo = -(T^((p+1)/2) R^-1) alpha_p (T^((p+1)/2) R^-1)
                (2, _) => {
                    let half = ((p + 1) / 2) as i64;
                    let g = mat_mul(&t(half), &r_inv);
                    (g.neg(), mat_mul(&t(half), &r_inv))
                }
                // beta_oo = (T^((p-1)/4) R) alpha_p (T^(-(p-1)/4) R^-1)
                (4, 1) => {
                    let q = ((p - 1) / 4) as i64;
                    (mat_mul(&t(q), &r), mat_mul(&t(-q), &r_inv))
                }
                // beta_oo = -(T^((p+1)/4) R^-1) alpha_p (T^((p+1)/4) R^-1)
                (4, 3) => {
                    let q = ((p + 1) / 4) as i64;
                    let g = mat_mul(&t(q), &r_inv);
                    (g.neg(), mat_mul(&t(q), &r_inv))
                }
                _ => unreachable!("p coprime to the level"),
            }
        }
    }
}

/// The compatibility function `c_{nu, nu'}` on the double coset
/// `Gamma alpha_p Gamma`, evaluated at `beta`.
///
/// `beta` is matched against the canonical representatives `beta_j`,
/// `beta_oo` of `Gamma \ Gamma alpha_p Gamma`; with `beta = gamma *
/// beta_j` and `beta_j = gamma1 alpha_p gamma2` this is
/// `nu(gamma gamma1) nu'(gamma2)`.
pub fn c_value(
    nu: &MultiplierSystem,
    nu2: &MultiplierSystem,
    beta: &Mat2,
    p: u64,
) -> Result<CycNumber> {
    let level = nu.level;
    if beta.det() != rat_int(p as i64) {
        return Err(Error::NotInDoubleCoset(beta.to_string()));
    }
    let reps: Vec<(Option<u64>, Mat2)> = (0..p)
        .map(|j| (Some(j), Mat2::from_i64(1, j as i64, 0, p as i64)))
        .chain(core::iter::once((None, Mat2::from_i64(p as i64, 0, 0, 1))))
        .collect();
    for (tag, rep) in reps {
        let gamma = mat_mul(beta, &mat_inv(&rep));
        if !gamma0_member(&gamma, level) {
            continue;
        }
        let (gamma1, gamma2) = canonical_decomposition(level, p, tag);
        debug_assert_eq!(
            mat_mul(&mat_mul(&gamma1, &Mat2::alpha(p)), &gamma2),
            rep
        );
        let v1 = nu_eval(nu, &mat_mul(&gamma, &gamma1))?;
        let v2 = nu_eval(nu2, &gamma2)?;
        return Ok(v1.mul(&v2));
    }
    Err(Error::NotInDoubleCoset(beta.to_string()))
}

/// Outcome of the compatibility sweep at one prime.
#[derive(Debug, Clone)]
pub struct CompatReport {
    pub level: u64,
    pub p: u64,
    pub compatible: bool,
    /// generators (or random products) violating the identity
    pub witnesses: Vec<Mat2>,
    pub checked: usize,
}

/// `alpha_p^-1 g alpha_p`, which maps `(a b; c d)` to `(a, bp; c/p, d)`.
fn conjugate_down(g: &Mat2, p: u64) -> Mat2 {
    let pr = rat_int(p as i64);
    Mat2::new(g.a.clone(), &g.b * &pr, &g.c / &pr, g.d.clone())
}

/// Verifies `nu(g) = nu(alpha_p^-1 g alpha_p)^p` for every generator `g`
/// of `Gamma_0(level * p)`, plus a fixed deterministic sample of products
/// of those generators.
pub fn compat_check(level: u64, p: u64) -> CompatReport {
    let nu = MultiplierSystem::base(level);
    let nu_p = nu.pow(p as i64);
    let gens = gamma0_generators(level * p);
    let mut witnesses = Vec::new();
    let mut checked = 0;

    let verify = |g: &Mat2, witnesses: &mut Vec<Mat2>| {
        let lhs = nu_eval(&nu, g).expect("generator lies in the level group");
        let rhs = nu_eval(&nu_p, &conjugate_down(g, p))
            .expect("conjugate lies in the level group");
        if !lhs.eq_value(&rhs) {
            witnesses.push(g.clone());
        }
    };

    for g in &gens {
        verify(g, &mut witnesses);
        checked += 1;
    }

    // supplementary check on pseudorandom 3-letter products of generators
    let mut state = 0x9e3779b97f4a7c15u64 ^ (level * 1_000_003 + p);
    let mut next = move || {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        state
    };
    for _ in 0..100 {
        let mut g = Mat2::identity();
        for _ in 0..3 {
            let pick = &gens[(next() % gens.len() as u64) as usize];
            g = mat_mul(&g, pick);
        }
        verify(&g, &mut witnesses);
        checked += 1;
    }

    CompatReport {
        level,
        p,
        compatible: witnesses.is_empty(),
        witnesses,
        checked,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(a: i64, b: i64, c: i64, d: i64) -> Mat2 {
        Mat2::from_i64(a, b, c, d)
    }

    #[test]
    fn base_values() {
        let nu_c = MultiplierSystem::nu_c();
        assert!(nu_eval(&nu_c, &m(1, 1, 0, 1)).unwrap().eq_value(&cyc_make(24, 1)));
        assert!(nu_eval(&nu_c, &m(1, 0, 2, 1)).unwrap().eq_value(&cyc_make(24, 1)));
        assert!(nu_eval(&nu_c, &Mat2::identity().neg())
            .unwrap()
            .eq_value(&CycNumber::one()));
        // T^3 R^2
        let g = mat_mul(&m(1, 3, 0, 1), &m(1, 0, 4, 1));
        assert!(nu_eval(&nu_c, &g).unwrap().eq_value(&cyc_make(24, 5)));

        let nu_l = MultiplierSystem::nu_l();
        assert!(nu_eval(&nu_l, &m(1, 1, 0, 1)).unwrap().eq_value(&cyc_make(8, 1)));
        assert!(nu_eval(&nu_l, &m(1, 0, 4, 1)).unwrap().eq_value(&cyc_make(8, 1)));
        assert!(nu_eval(&nu_l, &Mat2::identity().neg())
            .unwrap()
            .eq_value(&CycNumber::one()));
        assert!(nu_eval(&nu_l, &m(1, 0, 2, 1)).is_err());
    }

    #[test]
    fn powers_reduce() {
        let nu = MultiplierSystem::nu_c();
        assert_eq!(nu.pow(-23), nu);
        assert_eq!(nu.pow(25), nu);
        assert_eq!(MultiplierSystem::nu_l().pow(9), MultiplierSystem::nu_l());
    }

    #[test]
    fn c_values_level2() {
        let nu = MultiplierSystem::nu_c();
        for p in [5u64, 7, 11, 13] {
            let nu_p = nu.pow(p as i64);
            let boo = m(p as i64, 0, 0, 1);
            let expect = if ((p * p - 1) / 24) % 2 == 0 { 1 } else { -1 };
            assert!(c_value(&nu, &nu_p, &boo, p)
                .unwrap()
                .eq_value(&CycNumber::from_int(expect)), "p={p}");
            for j in 0..p {
                let bj = m(1, j as i64, 0, p as i64);
                let got = c_value(&nu, &nu_p, &bj, p).unwrap();
                assert!(got.eq_value(&cyc_make(24, (p * j % 24) as i64)), "p={p} j={j}");
            }
        }
    }

    #[test]
    fn c_values_level4() {
        let nu = MultiplierSystem::nu_l();
        for p in [3u64, 5, 7, 13] {
            let nu_p = nu.pow(p as i64);
            let boo = m(p as i64, 0, 0, 1);
            assert!(c_value(&nu, &nu_p, &boo, p).unwrap().eq_value(&CycNumber::one()), "p={p}");
            for j in [0, 1, p - 1] {
                let bj = m(1, j as i64, 0, p as i64);
                assert!(c_value(&nu, &nu_p, &bj, p)
                    .unwrap()
                    .eq_value(&cyc_make(8, (p * j % 8) as i64)), "p={p} j={j}");
            }
        }
    }

    #[test]
    fn c_value_coset_invariant() {
        // gamma * beta_j has the same c value scaled by nu(gamma)
        let nu = MultiplierSystem::nu_c();
        let p = 7u64;
        let nu_p = nu.pow(7);
        let gamma = m(3, 1, 2, 1);
        let bj = m(1, 4, 0, 7);
        let moved = mat_mul(&gamma, &bj);
        let lhs = c_value(&nu, &nu_p, &moved, p).unwrap();
        let rhs = nu_eval(&nu, &gamma).unwrap().mul(&c_value(&nu, &nu_p, &bj, p).unwrap());
        assert!(lhs.eq_value(&rhs));
        // a determinant mismatch is rejected
        assert!(c_value(&nu, &nu_p, &m(1, 0, 0, 5), p).is_err());
    }

    #[test]
    fn compat_small_primes() {
        let r = compat_check(2, 5);
        assert!(r.compatible, "witnesses: {:?}", r.witnesses);
        let r = compat_check(4, 3);
        assert!(r.compatible, "witnesses: {:?}", r.witnesses);
    }
}
