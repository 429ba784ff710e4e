//! Exact rational-function algebra and the formal integral calculus used to
//! re-derive the coefficient identities.

pub mod formal;
pub mod verify;
pub mod parse;
pub mod poly;
pub mod rational;
pub mod surd;
pub mod var;

pub use formal::{Ctx, FormalExpr, FormalTerm};
pub use poly::{Monomial, Poly};
pub use rational::{rf_equal, Point, RationalFunction};
pub use surd::Surd;
pub use var::Var;

use num_rational::BigRational;
use num_traits::ToPrimitive;

/// Nearest `f64` to an exact rational.
pub fn to_f64(x: &BigRational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}
