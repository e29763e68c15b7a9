//! Floating-point evaluation of the Maass wave forms `u_C` and `u_L` by
//! truncated K-Bessel Fourier expansions, the Hecke operators `T_p` on
//! them, and numerical modularity checks.
//!
//! Everything here is double precision; the stated tolerances of the
//! checks (1e-6 .. 1e-12) are comfortably within reach of `f64` because
//! the Bessel tails decay exponentially.

use crate::approx::ApproxComplex;
use crate::coeffs::{tc_formula, tl_formula, CoeffKind};
use crate::error::{Error, Result};
use crate::modgroup::{gamma0_member, mat_act_complex, Mat2};
use crate::multiplier::{nu_eval, MultiplierSystem};
use crate::numth;

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// A point `x + iy` of the upper half plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HPoint {
    pub x: f64,
    pub y: f64,
}

impl HPoint {
    pub fn new(x: f64, y: f64) -> Self {
        assert!(y > 0.0, "point must lie in the upper half plane");
        HPoint { x, y }
    }
}

/// Practical convergence floor on `y` for the Fourier expansion.
pub const Y_FLOOR: f64 = 0.05;

/// `K_0(y)` to within `tol`: power series below `y = 2`, trapezoidal
/// quadrature of `int_0^oo exp(-y cosh t) dt` above (the trapezoid rule
/// converges double-exponentially there).
pub fn bessel_k0(y: f64, tol: f64) -> f64 {
    assert!(y > 0.0 && tol > 0.0);
    if y < 2.0 {
        // K0 = -(ln(y/2) + gamma) I0(y) + sum_{k>=1} (y^2/4)^k / (k!)^2 H_k
        let q = y * y / 4.0;
        let mut term = 1.0f64; // (y^2/4)^k / (k!)^2
        let mut i0 = 1.0;
        let mut h = 0.0;
        let mut sum = 0.0;
        let mut k = 1.0f64;
        loop {
            term *= q / (k * k);
            h += 1.0 / k;
            i0 += term;
            sum += term * h;
            if term * (h + 1.0) < tol * 1e-3 {
                break;
            }
            k += 1.0;
        }
        return -(libm::log(y / 2.0) + EULER_GAMMA) * i0 + sum;
    }
    let mut h: f64 = 0.5;
    let mut prev = f64::NAN;
    loop {
        let mut s = 0.5 * libm::exp(-y); // t = 0 endpoint
        let mut t = h;
        loop {
            let e = -y * libm::cosh(t);
            if e < -745.0 {
                break;
            }
            s += libm::exp(e);
            t += h;
        }
        let val = s * h;
        if libm::fabs(val - prev) < tol * 0.25 || h < 1e-3 {
            return val;
        }
        prev = val;
        h *= 0.5;
    }
}

/// Which Maass form: fixes the level, the scale dividing the phase and
/// Bessel argument, the coefficient family, and the multiplier system.
#[derive(Debug, Clone, Copy)]
pub struct MaassSpec {
    pub level: u64,
    pub scale: u64,
    pub kind: CoeffKind,
    pub multiplier: MultiplierSystem,
}

impl MaassSpec {
    /// Cohen's `u_C` on `Gamma_0(2)`.
    pub fn u_c() -> Self {
        MaassSpec {
            level: 2,
            scale: 24,
            kind: CoeffKind::TC,
            multiplier: MultiplierSystem::nu_c(),
        }
    }

    /// Li-Ngo-Rhoades' `u_L` on `Gamma_0(4)`.
    pub fn u_l() -> Self {
        MaassSpec {
            level: 4,
            scale: 8,
            kind: CoeffKind::TL,
            multiplier: MultiplierSystem::nu_l(),
        }
    }

    fn coeff(&self, n: i64) -> i64 {
        match self.kind {
            CoeffKind::TC => tc_formula(n),
            CoeffKind::TL => tl_formula(n),
        }
    }
}

/// Smallest truncation index with provable tail below `eps`, from
/// `|T(n)| <= 4 sqrt(n)` and `K_0(t) <= sqrt(pi/2t) e^-t`.
fn truncation_index(scale: f64, y: f64, eps: f64) -> Result<i64> {
    let mut n = 4.0 * scale;
    loop {
        let t = core::f64::consts::TAU * n * y / scale;
        // tail bound: geometric decay with ratio exp(-tau y) per step of
        // the residue class; the prefactor 8 absorbs both signs of n
        let step = core::f64::consts::TAU * y;
        let bound = 8.0 * libm::sqrt(n) * libm::sqrt(core::f64::consts::PI / (2.0 * t))
            * libm::exp(-t)
            / (1.0 - libm::exp(-step));
        if bound < eps {
            return Ok(n as i64);
        }
        n *= 1.5;
        if n > 4e6 {
            return Err(Error::ConvergenceError(alloc::format!(
                "truncation index diverges at y = {y}"
            )));
        }
    }
}

/// `sqrt(y) sum_(n = 1 mod scale) T(n) K_0(2 pi |n| y / scale)
/// e^(2 pi i n x / scale)`, accurate to `eps`.
pub fn eval_maass_f64(spec: &MaassSpec, z: HPoint, eps: f64) -> Result<(f64, f64)> {
    if z.y < Y_FLOOR {
        return Err(Error::ConvergenceError(alloc::format!(
            "y = {} below the convergence floor {Y_FLOOR}",
            z.y
        )));
    }
    let s = spec.scale as f64;
    let nmax = truncation_index(s, z.y, eps)?;
    let mut re = 0.0;
    let mut im = 0.0;
    let mut n = 1i64 - spec.scale as i64 * ((nmax + 1) / spec.scale as i64 + 1);
    while n <= nmax {
        let t = spec.coeff(n);
        if t != 0 {
            let arg = core::f64::consts::TAU * (n.abs() as f64) * z.y / s;
            let k = bessel_k0(arg, eps * 1e-3);
            let phase = core::f64::consts::TAU * (n as f64) * z.x / s;
            re += (t as f64) * k * libm::cos(phase);
            im += (t as f64) * k * libm::sin(phase);
        }
        n += spec.scale as i64;
    }
    let sy = libm::sqrt(z.y);
    Ok((sy * re, sy * im))
}

/// As `eval_maass_f64`, wrapped in the crate's complex value type.
pub fn eval_maass(spec: &MaassSpec, z: HPoint, eps: f64) -> Result<ApproxComplex> {
    let (re, im) = eval_maass_f64(spec, z, eps)?;
    Ok(ApproxComplex::new(re, im, 15))
}

fn check_prime(spec: &MaassSpec, p: u64) -> Result<()> {
    let ok = numth::is_prime(p)
        && match spec.level {
            2 => p >= 5,
            _ => p >= 3,
        };
    if !ok {
        return Err(Error::BadPrime(p as i64));
    }
    Ok(())
}

/// The Hecke operator `T_p` on the Maass form:
/// `(1/sqrt p)(sign * u(pz) + sum_j zeta^(-pj) u((z+j)/p))`, with the
/// reflected arguments `-p conj(z)`, `(-conj(z)+j)/p` for the `p = -1`
/// classes. `sign` is `(-1)^((p^2-1)/24)` at level 2 and `1` at level 4.
pub fn hecke_maass(spec: &MaassSpec, p: u64, z: HPoint, eps: f64) -> Result<(f64, f64)> {
    check_prime(spec, p)?;
    let (root, reflect, sign) = match spec.level {
        2 => (
            24.0f64,
            p % 6 == 5,
            if ((p * p - 1) / 24) % 2 == 0 { 1.0 } else { -1.0 },
        ),
        _ => (8.0, p % 4 == 3, 1.0),
    };
    let x0 = if reflect { -z.x } else { z.x };
    let pf = p as f64;
    let term_eps = eps / (pf + 2.0);

    let (mut re, mut im) = eval_maass_f64(spec, HPoint::new(pf * x0, pf * z.y), term_eps)?;
    re *= sign;
    im *= sign;
    for j in 0..p {
        let zj = HPoint::new((x0 + j as f64) / pf, z.y / pf);
        let (ur, ui) = eval_maass_f64(spec, zj, term_eps)?;
        let ang = -core::f64::consts::TAU * (p * j) as f64 / root;
        let (c, s) = (libm::cos(ang), libm::sin(ang));
        re += ur * c - ui * s;
        im += ur * s + ui * c;
    }
    let rp = 1.0 / libm::sqrt(pf);
    Ok((re * rp, im * rp))
}

/// `|u(gamma z) - nu(gamma) u(z)|`, the numerical modularity defect.
pub fn modularity_residual(spec: &MaassSpec, gamma: &Mat2, z: HPoint, eps: f64) -> Result<f64> {
    if !gamma0_member(gamma, spec.level) {
        return Err(Error::NotInGroup(alloc::format!("{gamma}")));
    }
    let (gx, gy) = mat_act_complex(gamma, z.x, z.y);
    let (ar, ai) = eval_maass_f64(spec, HPoint::new(gx, gy), eps)?;
    let (ur, ui) = eval_maass_f64(spec, z, eps)?;
    let (nr, ni) = nu_eval(&spec.multiplier, gamma)?.embed_f64();
    let dr = ar - (nr * ur - ni * ui);
    let di = ai - (nr * ui + ni * ur);
    Ok(libm::sqrt(dr * dr + di * di))
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Independent quadrature oracle:
    /// `K_0(y) = int_0^oo exp(-y sqrt(1+u^2)) / sqrt(1+u^2) du`
    /// by adaptive Simpson.
    fn k0_oracle(y: f64) -> f64 {
        fn f(y: f64, u: f64) -> f64 {
            let r = (1.0 + u * u).sqrt();
            (-y * r).exp() / r
        }
        fn simpson(y: f64, a: f64, b: f64, fa: f64, fm: f64, fb: f64, tol: f64) -> f64 {
            let m = 0.5 * (a + b);
            let lm = 0.5 * (a + m);
            let rm = 0.5 * (m + b);
            let flm = f(y, lm);
            let frm = f(y, rm);
            let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
            let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
            let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
            if (left + right - whole).abs() < 15.0 * tol {
                left + right + (left + right - whole) / 15.0
            } else {
                simpson(y, a, m, fa, flm, fm, tol * 0.5)
                    + simpson(y, m, b, fm, frm, fb, tol * 0.5)
            }
        }
        let hi = 60.0 / y + 20.0;
        let m = 0.5 * hi;
        simpson(y, 0.0, hi, f(y, 0.0), f(y, m), f(y, hi), 1e-15)
    }

    #[test]
    fn k0_against_oracle() {
        assert!((bessel_k0(1.0, 1e-13) - 0.421_024_438_240_708_3).abs() < 1e-12);
        for y in [0.1, 0.5, 1.0, 1.9, 2.0, 3.5, 7.0, 20.0] {
            let got = bessel_k0(y, 1e-13);
            let want = k0_oracle(y);
            assert!((got - want).abs() < 1e-11, "y={y}: {got} vs {want}");
        }
    }

    #[test]
    fn k0_asymptotics_and_monotonicity() {
        let y = 50.0;
        let ratio = bessel_k0(y, 1e-14) * y.exp() / (core::f64::consts::PI / (2.0 * y)).sqrt();
        assert!((ratio - 1.0).abs() < 0.01);
        assert!(bessel_k0(10.0, 1e-12) < bessel_k0(5.0, 1e-12));
    }

    #[test]
    fn periodicity_and_reflection() {
        let uc = MaassSpec::u_c();
        let z = HPoint::new(0.3, 1.0);
        let (r1, i1) = eval_maass_f64(&uc, z, 1e-13).unwrap();
        let (r2, i2) = eval_maass_f64(&uc, HPoint::new(z.x + 1.0, z.y), 1e-13).unwrap();
        // u(z + 1) = zeta_24 u(z)
        let a = core::f64::consts::TAU / 24.0;
        let (c, s) = (a.cos(), a.sin());
        assert!((r2 - (r1 * c - i1 * s)).abs() < 1e-12);
        assert!((i2 - (r1 * s + i1 * c)).abs() < 1e-12);
        // u(-x + iy) = conj(u(x + iy)) since the coefficients are real
        let (r3, i3) = eval_maass_f64(&uc, HPoint::new(-z.x, z.y), 1e-13).unwrap();
        assert!((r3 - r1).abs() < 1e-12 && (i3 + i1).abs() < 1e-12);
    }

    #[test]
    fn modularity() {
        let uc = MaassSpec::u_c();
        let t = Mat2::from_i64(1, 1, 0, 1);
        let r = Mat2::from_i64(1, 0, 2, 1);
        let z = HPoint::new(0.0, 1.0);
        assert!(modularity_residual(&uc, &t, z, 1e-13).unwrap() < 1e-12);
        assert!(modularity_residual(&uc, &r, z, 1e-10).unwrap() < 1e-8);
        let ul = MaassSpec::u_l();
        let r4 = Mat2::from_i64(1, 0, 4, 1);
        assert!(modularity_residual(&ul, &r4, HPoint::new(-0.25, 1.0), 1e-10).unwrap() < 1e-8);
        assert!(modularity_residual(&uc, &Mat2::from_i64(1, 0, 3, 1), z, 1e-8).is_err());
    }

    #[test]
    fn hecke_eigenvalues() {
        let uc = MaassSpec::u_c();
        let z = HPoint::new(0.3, 1.5);
        let (hr, hi) = hecke_maass(&uc, 5, z, 1e-8).unwrap();
        assert!(hr.abs() < 1e-6 && hi.abs() < 1e-6, "T_5 u_C = {hr}+{hi}i");

        let z = HPoint::new(0.2, 2.0);
        let (hr, hi) = hecke_maass(&uc, 23, z, 1e-8).unwrap();
        let (ur, ui) = eval_maass_f64(&uc, z, 1e-9).unwrap();
        let lam = tc_formula(-23) as f64;
        assert!((hr - lam * ur).abs() < 1e-6 && (hi - lam * ui).abs() < 1e-6);

        let ul = MaassSpec::u_l();
        let z = HPoint::new(0.1, 2.0);
        let (hr, hi) = hecke_maass(&ul, 7, z, 1e-8).unwrap();
        let (ur, ui) = eval_maass_f64(&ul, z, 1e-9).unwrap();
        let lam = tl_formula(-7) as f64;
        assert!((hr - lam * ur).abs() < 1e-6 && (hi - lam * ui).abs() < 1e-6);
    }

    #[test]
    fn laplace_eigenvalue() {
        // Delta u = -y^2 (u_xx + u_yy) = u/4, checked by finite differences
        let uc = MaassSpec::u_c();
        let z = HPoint::new(0.17, 0.9);
        let h = 1e-3;
        let v = |x: f64, y: f64| eval_maass_f64(&uc, HPoint::new(x, y), 1e-13).unwrap();
        let (c_r, c_i) = v(z.x, z.y);
        let (xr1, xi1) = v(z.x + h, z.y);
        let (xr2, xi2) = v(z.x - h, z.y);
        let (yr1, yi1) = v(z.x, z.y + h);
        let (yr2, yi2) = v(z.x, z.y - h);
        let lap_r = (xr1 + xr2 + yr1 + yr2 - 4.0 * c_r) / (h * h);
        let lap_i = (xi1 + xi2 + yi1 + yi2 - 4.0 * c_i) / (h * h);
        let got_r = -z.y * z.y * lap_r;
        let got_i = -z.y * z.y * lap_i;
        assert!((got_r - c_r / 4.0).abs() < 1e-4 * (1.0 + c_r.abs()));
        assert!((got_i - c_i / 4.0).abs() < 1e-4 * (1.0 + c_i.abs()));
    }

    #[test]
    fn floors_and_errors() {
        let uc = MaassSpec::u_c();
        assert!(eval_maass_f64(&uc, HPoint::new(0.0, 0.01), 1e-6).is_err());
        assert!(hecke_maass(&uc, 4, HPoint::new(0.0, 1.0), 1e-6).is_err());
        assert!(hecke_maass(&uc, 3, HPoint::new(0.0, 1.0), 1e-6).is_err());
        let v = eval_maass(&uc, HPoint::new(0.0, 1.0), 1e-10).unwrap();
        let (r, _) = eval_maass_f64(&uc, HPoint::new(0.0, 1.0), 1e-10).unwrap();
        assert!((v.re_f64() - r).abs() < 1e-14);
    }
}
