//! Exact and numerical machinery around two explicit Maass wave forms and
//! their quantum modular companions.
//!
//! The crate is organized in layers:
//!
//! - [`rational`] / [`cyclotomic`] / [`approx`]: exact arbitrary-precision
//!   rationals, elements of cyclotomic fields `Q(zeta_M)` in canonical form,
//!   and configurable-precision complex floats.
//! - [`modgroup`]: exact 2x2 matrix algebra, membership and generator-word
//!   decomposition in `Gamma_0(2)` and `Gamma_0(4)`, generators of
//!   `Gamma_0(N)`, cusp classification and Hecke coset representatives.
//! - [`multiplier`]: the unit-circle multiplier systems on `Gamma_0(2)` and
//!   `Gamma_0(4)`, the compatibility function on double cosets, and the
//!   prime compatibility sweep.
//! - [`series`] / [`coeffs`]: truncated exact q-series (sigma, sigma*, W1,
//!   W2) and the coefficient families `T_C(n)`, `T_L(n)` via both
//!   brute-force quadratic-field oracles and multiplicative closed forms.
//! - [`quantum`]: exact evaluation of the quantum modular forms `f_C`, `f_L`
//!   at rationals, Hecke operators on them, cocycles, and the
//!   root-of-unity identities for `T_C(p)`, `T_L(p)`.
//! - [`maass`]: floating-point evaluation of the Maass wave forms `u_C`,
//!   `u_L` by truncated K-Bessel Fourier expansions, Hecke operators and
//!   modularity residuals.
//!
//! Everything outside [`maass`] is exact: equalities asserted by the test
//! suite are identities in cyclotomic fields, not numerical approximations.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod approx;
pub mod coeffs;
pub mod cyclotomic;
pub mod error;
pub mod maass;
pub mod modgroup;
pub mod multiplier;
pub mod numth;
pub mod quantum;
pub mod rational;
pub mod series;

pub use approx::ApproxComplex;
pub use maass::{HPoint, MaassSpec};
pub use cyclotomic::CycNumber;
pub use error::Error;
pub use modgroup::{CuspClass, GenWord, Mat2, ProjPoint};
pub use multiplier::MultiplierSystem;
pub use quantum::{QPoint, QValue};
pub use rational::BigRat;
pub use series::TruncSeries;
