//! NLS hierarchy on a spectral grid.
//!
//! Fields are doublets `(psi, psibar)` carried independently; physical fields set
//! `psibar = conj(psi)`. Derivatives are Fourier multipliers on the periodic
//! extension, so every field handed to the recursion operator must decay at both
//! ends of the grid.

mod grid;
mod hierarchy;
mod lax;

pub use grid::{
    antiderivative, derivative, grid_points, Doublet, GridField, SpectralGrid, DECAY_FLAG_TOL,
    DECAY_GUARD_TOL, DEFAULT_LENGTH, DEFAULT_POINTS, DEFAULT_X0, MIN_POINTS, QNLS_LENGTH,
    QNLS_POINTS, QNLS_X0,
};
pub use hierarchy::{
    explicit_flow, hierarchy_rhs, mass, nls_residual, qnls_rhs_order2, recursion_apply, rk4_step,
    Recursion, Soliton,
};
pub use lax::{lax_coefficients, zero_curvature_mismatch, zero_curvature_residual, LaxData};
