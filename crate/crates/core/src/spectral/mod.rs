//! Spectral numerics on `CP¹`, realised as the unit round sphere.

pub mod corpus;
pub mod field;
pub mod grid;
pub mod newton;
pub mod ops;

pub use field::SphereField;
pub use grid::QuadratureGrid;
pub use newton::{gmres, newton_solve, NewtonOptions, SolveReport};
pub use ops::{
    box_op, grad_energy, grad_energy_quadrature, ibp_residual, lambda1_rayleigh, perturbation_tcoeff, quotient, quotient_gradient,
    self_adjointness_residual, sobolev_check, IneqReport, PerturbationReport,
};

use std::sync::Arc;

/// Shared grid for the given band limit and the default oversampling.
pub fn make_grid(band: usize) -> crate::Result<Arc<QuadratureGrid>> {
    QuadratureGrid::new(band).map(Arc::new)
}
