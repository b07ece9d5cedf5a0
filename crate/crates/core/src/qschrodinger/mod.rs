//! Polynomial solutions of the q-Schrodinger equation
//! `i hbar psi_t = (1/sinh lambda) sinh(-lambda hbar^2/(2m) psi_xx)`
//! and the classical q-Burgers characteristics.
//!
//! Operators are power series in `d^2/dx^2`; on polynomials they truncate, so every
//! result here is exact up to floating-point rounding.

mod burgers;
mod poly;
mod roots;

pub use burgers::{burgers_solve, shock_time, BurgersProfile, BurgersSolution, SHOCK_T_MAX};
pub use poly::{
    apply_d2_series, boost_apply, compare_with_tabulated, complex_velocity, monomial_basis, p0,
    p0_k_rhs, p1, qkf_polynomial, schrodinger_polynomial, schrodinger_residual,
    symmetry_commutators, tabulated_qkf, BivarPolynomial, CommutatorReport, D2Series,
    DispersionOperator, PolyParams, TermMismatch, BOOST_GROUPING,
};
pub use roots::{polynomial_roots, zeros_over_time, RootSlice, ROOT_RESIDUAL, ROOT_SEED};
