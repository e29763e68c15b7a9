//! Acceptance suite: one test per criterion, each printing a single
//! pass/fail line (visible with `--nocapture`) before asserting.

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rayon::prelude::*;

use qmaass_core::coeffs::{tc_formula, tc_oracle, tl_formula, tl_oracle};
use qmaass_core::maass::{
    bessel_k0, eval_maass_f64, hecke_maass, modularity_residual, HPoint, MaassSpec,
};
use qmaass_core::modgroup::{
    cusp_classify, decompose_word, mat_act, mat_mul, Mat2, ProjPoint,
};
use qmaass_core::multiplier::{compat_check, nu_eval, MultiplierSystem};
use qmaass_core::numth;
use qmaass_core::quantum::{
    cocycle, eval_fc, eval_fl, hecke_cocycle, hecke_qmf, identity_tc, identity_tl, FormKind,
    QPoint,
};
use qmaass_core::rational::{rat, rat_int};
use qmaass_core::series::{combine_phi, combine_w, series_sigma, series_sigma_adh, series_w, WKind};

fn report(n: usize, name: &str, ok: bool) {
    println!("criterion {n} ({name}): {}", if ok { "pass" } else { "fail" });
    assert!(ok, "criterion {n} ({name}) failed");
}

#[test]
fn c1_coefficient_identity() {
    let sigma = series_sigma(2001);
    let mut ok = sigma.coeff(45) == rat_int(4) && sigma.coeff(1609) == rat_int(6);
    ok &= (0..=2000i64).into_par_iter().all(|n| {
        let m = 24 * n + 1;
        let s = sigma.coeff(n as usize);
        s == rat_int(tc_formula(m)) && s == rat_int(tc_oracle(m).unwrap())
    });
    report(1, "S(n) = T_C(24n+1), oracle and formula, n <= 2000", ok);
}

#[test]
fn c2_adh_identity() {
    let a = series_sigma(2000);
    let b = series_sigma_adh(2000);
    report(2, "Eulerian sigma equals indefinite-theta sigma to order 2000", a == b);
}

#[test]
fn c3_combination_identities() {
    let phi = combine_phi(2001);
    let w = combine_w(2001);
    let mut ok = true;
    for (n, c) in &phi {
        if n.abs() <= 2000 {
            ok &= *c == rat_int(tc_formula(*n));
        }
    }
    for (n, c) in &w {
        if n.abs() <= 2000 {
            ok &= *c == rat_int(tl_formula(*n)) && *c == rat_int(tl_oracle(*n).unwrap());
        }
    }
    // printed leading expansions of W1 and W2
    let w1 = series_w(WKind::W1, 7);
    let w2 = series_w(WKind::W2, 10);
    for (k, v) in [1, -1, 2, -1, 0, -2, 3].iter().enumerate() {
        ok &= w1.coeff(k) == rat_int(*v);
    }
    for (k, v) in [0, -2, 0, -2, 2, 0, 2, 0, 2, -2].iter().enumerate() {
        ok &= w2.coeff(k) == rat_int(*v);
    }
    report(3, "phi and qW1(q^8)+q^-1 W2(q^8) match T_C, T_L for |n| <= 2000", ok);
}

#[test]
fn c4_compatibility_sweep() {
    let l2 = numth::primes_in(5, 101);
    let l4 = numth::primes_in(3, 101);
    let ok2 = l2.par_iter().all(|&p| compat_check(2, p).compatible);
    let ok4 = l4.par_iter().all(|&p| compat_check(4, p).compatible);
    report(4, "nu(g) = nu(conj)^p on Gamma_0(level p) generators, p <= 101", ok2 && ok4);
}

#[test]
fn c5_quantum_eigenforms() {
    // 20 rational points with small denominators
    let fc_points: Vec<QPoint> = (1..=20)
        .map(|k| QPoint::new(rat(k, (k % 11) + 2)))
        .collect();
    let mut checks: Vec<(FormKind, u64, i64, QPoint)> = Vec::new();
    for &p in &[5u64, 7, 11, 13, 17, 19] {
        for x in &fc_points {
            checks.push((FormKind::FC, p, 0, x.clone()));
        }
    }
    for x in &fc_points {
        checks.push((FormKind::FC, 23, 2, x.clone()));
    }
    // f_L lives on S_0 (odd denominator) and S_oo (denominator 0 mod 4)
    let fl_points: Vec<QPoint> = (1..=5)
        .flat_map(|k| {
            [
                QPoint::new(rat(k, 2 * k + 1)),
                QPoint::new(rat(k, 2 * k + 3)),
                QPoint::new(rat(2 * k + 1, 4)),
                QPoint::new(rat(2 * k + 1, 8)),
            ]
        })
        .collect();
    for &(p, lam) in &[(3u64, 0i64), (5, 0), (7, 2)] {
        for x in &fl_points {
            checks.push((FormKind::FL, p, lam, x.clone()));
        }
    }
    let ok = checks.par_iter().all(|(form, p, lam, x)| {
        let h = hecke_qmf(*form, *p, x).unwrap();
        let f = match form {
            FormKind::FC => eval_fc(x),
            FormKind::FL => eval_fl(x).unwrap(),
        };
        h.exact.sub(&f.exact.scale(&rat_int(*lam))).is_zero()
    });
    report(5, "exact quantum eigenform identities for f_C and f_L", ok);
}

#[test]
fn c6_root_of_unity_identities() {
    let mut ok = identity_tc(73).unwrap() == 2
        && identity_tc(97).unwrap() == -2
        && identity_tl(7).unwrap() == 2
        && identity_tl(31).unwrap() == -2;
    for p in numth::primes_in(5, 53) {
        let want = if p % 6 == 1 {
            tc_formula(p as i64)
        } else {
            -tc_formula(-(p as i64))
        };
        ok &= identity_tc(p).unwrap() == want;
    }
    for p in numth::primes_in(3, 31) {
        let want = if p % 4 == 1 {
            tl_formula(p as i64)
        } else {
            -tl_formula(-(p as i64))
        };
        ok &= identity_tl(p).unwrap() == want;
    }
    report(6, "identity_tc/identity_tl match the formula values", ok);
}

#[test]
fn c7_figure_one() {
    let gamma = Mat2::from_i64(1, 0, 4, 1);
    let two = rat_int(2);
    let ok = (0..200i64)
        .into_par_iter()
        .filter(|k| k - 100 != -25) // x = -1/4, the pole
        .all(|k| {
            let x = rat(k - 100, 100);
            let q = QPoint::new(x);
            let h = match cocycle(FormKind::FL, &gamma, &q) {
                Ok(h) => h,
                Err(_) => return true, // outside the domain: emitted empty
            };
            match hecke_cocycle(FormKind::FL, 7, &gamma, &q) {
                Ok(hh) => hh.exact.sub(&h.exact.scale(&two)).is_zero(),
                Err(_) => false,
            }
        });
    report(7, "H_L = 2 h_L exactly on the 200-point Figure-1 grid", ok);
}

#[test]
fn c8_maass_numerics() {
    let uc = MaassSpec::u_c();
    let ul = MaassSpec::u_l();
    let t = Mat2::from_i64(1, 1, 0, 1);
    let r = Mat2::from_i64(1, 0, 2, 1);
    let trt = mat_mul(&mat_mul(&t, &Mat2::from_i64(1, 0, -2, 1)), &t);
    let points = [
        HPoint::new(0.0, 1.0),
        HPoint::new(0.3, 1.2),
        HPoint::new(-0.4, 1.5),
        HPoint::new(0.125, 2.0),
        HPoint::new(0.7, 3.0),
    ];
    let mut ok = true;
    for g in [&t, &r, &trt] {
        for z in &points {
            ok &= modularity_residual(&uc, g, *z, 1e-11).unwrap() < 1e-8;
        }
    }
    let eigen = |spec: &MaassSpec, p: u64, lam: f64, z: HPoint| {
        let (hr, hi) = hecke_maass(spec, p, z, 1e-8).unwrap();
        let (ur, ui) = eval_maass_f64(spec, z, 1e-9).unwrap();
        ((hr - lam * ur).powi(2) + (hi - lam * ui).powi(2)).sqrt() < 1e-6
    };
    let z = HPoint::new(0.2, 2.0);
    ok &= eigen(&uc, 5, 0.0, z);
    ok &= eigen(&uc, 7, 0.0, z);
    ok &= eigen(&uc, 23, tc_formula(-23) as f64, z);
    ok &= eigen(&ul, 7, tl_formula(-7) as f64, z);
    // K0 against the independent quadrature oracle on a log grid
    let mut y = 0.05f64;
    while y <= 50.0 {
        ok &= (bessel_k0(y, 1e-14) - k0_oracle(y)).abs() < 1e-12;
        y *= 1.6;
    }
    report(8, "Maass modularity, Hecke residuals, and K0 oracle", ok);
}

/// `K_0(y) = int_0^oo exp(-y sqrt(1+u^2)) / sqrt(1+u^2) du` by adaptive
/// Simpson quadrature: independent of the implementation under test.
fn k0_oracle(y: f64) -> f64 {
    fn f(y: f64, u: f64) -> f64 {
        let r = (1.0 + u * u).sqrt();
        (-y * r).exp() / r
    }
    fn simpson(y: f64, a: f64, b: f64, fa: f64, fm: f64, fb: f64, tol: f64) -> f64 {
        let m = 0.5 * (a + b);
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let (flm, frm) = (f(y, lm), f(y, rm));
        let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        if (left + right - whole).abs() < 15.0 * tol {
            left + right + (left + right - whole) / 15.0
        } else {
            simpson(y, a, m, fa, flm, fm, tol * 0.5) + simpson(y, m, b, fm, frm, fb, tol * 0.5)
        }
    }
    let hi = 60.0 / y + 20.0;
    let m = 0.5 * hi;
    simpson(y, 0.0, hi, f(y, 0.0), f(y, m), f(y, hi), 1e-16)
}

fn random_word(rng: &mut StdRng, level: i64, len: usize) -> Mat2 {
    let mut g = Mat2::identity();
    for _ in 0..len {
        let e = rng.gen_range(-4i64..=4);
        let step = if rng.gen_bool(0.5) {
            Mat2::from_i64(1, e, 0, 1)
        } else {
            Mat2::from_i64(1, 0, level * e, 1)
        };
        g = mat_mul(&g, &step);
    }
    if rng.gen_bool(0.5) {
        g.neg()
    } else {
        g
    }
}

#[test]
fn c9_property_suites() {
    let mut ok = true;

    // multiplier homomorphism on 500 random pairs, both levels
    let mut rng = StdRng::seed_from_u64(11);
    for i in 0..500 {
        let level = if i % 2 == 0 { 2i64 } else { 4 };
        let nu = MultiplierSystem::base(level as u64);
        let g = random_word(&mut rng, level, 6);
        let h = random_word(&mut rng, level, 6);
        let lhs = nu_eval(&nu, &mat_mul(&g, &h)).unwrap();
        let rhs = nu_eval(&nu, &g).unwrap().mul(&nu_eval(&nu, &h).unwrap());
        ok &= lhs.eq_value(&rhs);
    }

    // word decomposition round trip on 1000 random words
    let mut rng = StdRng::seed_from_u64(12);
    for i in 0..1000 {
        let level = if i % 2 == 0 { 2i64 } else { 4 };
        let g = random_word(&mut rng, level, 8);
        let w = decompose_word(&g, level as u64).unwrap();
        ok &= w.reconstruct() == g;
    }

    // complete multiplicativity of T_C and T_L on 200 coprime pairs
    let mut rng = StdRng::seed_from_u64(13);
    let mut done = 0;
    while done < 200 {
        let tc = rng.gen_bool(0.5);
        let modulus = if tc { 24 } else { 8 };
        let m = modulus * rng.gen_range(-40i64..40) + 1;
        let n = modulus * rng.gen_range(-40i64..40) + 1;
        if m == 0 || n == 0 || numth::gcd_i(m, n) != 1 {
            continue;
        }
        let f = if tc { tc_formula } else { tl_formula };
        ok &= f(m * n) == f(m) * f(n);
        done += 1;
    }

    // cusp-orbit invariance on 200 random (gamma, x)
    let mut rng = StdRng::seed_from_u64(14);
    for i in 0..200 {
        let level = if i % 2 == 0 { 2u64 } else { 4 };
        let g = random_word(&mut rng, level as i64, 5);
        let a = rng.gen_range(-30i64..30);
        let c = rng.gen_range(0i64..30);
        let x = if a == 0 && c == 0 {
            ProjPoint::from_i64(1, 0)
        } else {
            ProjPoint::from_i64(a, c)
        };
        ok &= cusp_classify(&mat_act(&g, &x), level) == cusp_classify(&x, level);
    }

    report(9, "homomorphism, round-trip, multiplicativity, cusp-orbit suites", ok);
}
