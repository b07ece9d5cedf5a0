//! Two-dimensional ideal flows from complex potentials.
//!
//! Domains bounded by circles and straight walls are handled by image theorems:
//! each theorem turns a free-space potential `f` into one whose stream function
//! `Im F` is constant along every wall. Annulus sums are truncated symmetrically
//! at `|m| <= M`; every construction has a residual estimator so that `M` can be
//! checked.

mod annulus;
mod potential;
mod theorems;

pub use annulus::{
    annulus_bohr_sommerfeld, annulus_f_spectrum, annulus_f_transform, annulus_hamiltonian,
    annulus_level_window, annulus_omega, canonical_action, vortex_simulate, Trajectory,
    TrajectoryPoint, VortexState, MARGIN_FRACTION, SINGULAR_H_TOL,
};
pub use potential::{
    base_dipole, base_uniform, base_vortex, conjugate_flow, sample_field, ComplexPotential,
    FieldGrid, FieldSample, MASK_RADIUS,
};
pub use theorems::{
    annulus_full_vortex_potential, annulus_image_velocity, annulus_vortex_potential, arc_residual,
    circle_residual, circular_wedge, double_circular_wedge, full_annulus_images,
    half_annulus_images, kummer_kaleidoscope, kummer_product, one_circle, ray_residual, two_circle,
    wedge, AnnulusSpec, BoundaryResidual, BOUNDARY_SAMPLES, DEFAULT_TRUNCATION,
};
