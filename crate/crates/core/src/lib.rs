//! Verification and exploration toolkit for Sobolev inequalities on compact
//! Kähler manifolds with `Ric(ω) ≥ ω`.
//!
//! The crate has three computational layers and one reporting layer:
//!
//! - [`constants`]: closed-form Sobolev constants, the admissible `k`
//!   interval, thresholds on `λ` and the optimizer over `k`.
//! - [`algebra`]: an exact multivariate rational-function engine plus a
//!   formal calculus of integrals that re-derives every coefficient identity
//!   behind the uniqueness argument.
//! - [`spectral`]: spherical-harmonic numerics on `CP¹` (the unit round
//!   sphere), where the inequalities and the PDE `-□u + λu = u^q` are
//!   checked directly.
//! - [`cli`]: the `ksl` command-line surface and deterministic JSON/CSV
//!   reports.
//!
//! See the runnable programs under `examples/` for one walkthrough per
//! capability.

// `!(x > 0.0)` is used on purpose so that NaN fails validation
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod algebra;
pub mod cli;
pub mod constants;
mod dd;
pub mod error;
pub mod spectral;

pub use error::{Error, Result};
