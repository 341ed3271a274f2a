//! Cycle integrals of smooth modular forms for `SL2(Z)` along closed geodesics.
//!
//! The crate is organised bottom-up:
//!
//! * [`bqf`]: exact arithmetic of indefinite binary quadratic forms (Pell
//!   automorphs, geodesic frames, reduction cycles).
//! * [`wirtinger`]: a term algebra of atoms `c·y^a·exp(αz + βz̄)` closed under
//!   the Maass operators `L`, `R`, `ξ`, `Δ` and the derivative `𝒟`.
//! * [`forms`]: concrete modular objects (q-expansions, products, Eisenstein
//!   lattice sums) with fundamental-domain reduction.
//! * [`cycle`]: the cycle-integral engine with adaptive Gauss-Legendre
//!   quadrature.
//! * [`verify`]: executable identity checks between cycle integrals, and the
//!   suite runner used by the command-line tool.
//!
//! Data-parallel inner loops (lattice rows, quadrature panels, suite jobs)
//! run on rayon when the default `parallel` feature is enabled and fall back
//! to sequential loops otherwise. Both paths produce bit-identical results.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bqf;
pub mod cycle;
mod error;
pub mod forms;
pub mod numeric;
mod par;
pub mod verify;
pub mod wirtinger;

pub use error::{Error, Result};
pub use num_complex::Complex64;
