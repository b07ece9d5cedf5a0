//! Numerical toolkit for q-deformed oscillators and their relatives.
//!
//! - [`qcalc`]: q-numbers, Jackson q-exponential and q-logarithm, q- and
//!   Binet-Fibonacci derivatives, exact Fibonacci numbers.
//! - [`oscillators`]: classical and quantum f-oscillators, the symmetric
//!   q-oscillator, the semi-relativistic oscillator and the golden oscillator.
//! - [`qschrodinger`]: exact polynomial solutions of the sinh-dispersion
//!   Schrodinger equation, boost recursion, zeros, and q-Burgers characteristics.
//! - [`nls`]: recursion operator of the NLS hierarchy on a spectral grid.
//! - [`flows`]: complex potentials for circle, wedge and annulus image theorems
//!   and the vortex-in-annulus oscillator.
//! - [`formats`]: CSV and JSON encodings shared by the CLI and bindings.

// `!(x > 0.0)` is the NaN-rejecting form of a positivity check.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod flows;
pub mod formats;
pub mod nls;
pub mod oscillators;
pub mod qcalc;
pub mod qschrodinger;

pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;

pub(crate) const I: C64 = C64 { re: 0.0, im: 1.0 };
