//! Seeded random trials, run in parallel with one field per task.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::field::SphereField;
use super::grid::QuadratureGrid;
use super::newton::{newton_solve, NewtonOptions, SolveReport};
use super::ops::{quotient, quotient_gradient, sobolev_check, IneqReport};
use crate::Result;

/// Highest degree drawn in random trial fields.
pub const TRIAL_DEGREE: usize = 6;

fn rng_for(seed: u64, trial: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0x9e37_79b9_7f4a_7c15) ^ trial)
}

/// `center·(1 + f)` with `f` a random mean-zero field scaled to
/// `sup |f| = spread < 1`.
pub fn random_positive(grid: &Arc<QuadratureGrid>, rng: &mut impl Rng, center: f64, spread: f64) -> SphereField {
    let f = SphereField::random(grid, rng, TRIAL_DEGREE, 0.0, 1.0);
    let f = f.scale(spread / f.sup_norm());
    SphereField::constant(grid, center).lincomb(1.0, &f, center)
}

/// Sobolev inequality on `trials` random fields with random mean in `[-1, 1]`.
pub fn sobolev_corpus(grid: &Arc<QuadratureGrid>, q: f64, c: f64, trials: usize, seed: u64) -> Result<Vec<IneqReport>> {
    (0..trials as u64)
        .into_par_iter()
        .map(|t| {
            let mut rng = rng_for(seed, t);
            let mean = rng.gen_range(-1.0..1.0);
            let phi = SphereField::random(grid, &mut rng, TRIAL_DEGREE, mean, 1.0);
            sobolev_check(&phi, q, c, &format!("random seed={seed} trial={t}"))
        })
        .collect()
}

/// Newton from `count` random positive starts around `λ^{1/(q-1)}`.
pub fn newton_corpus(grid: &Arc<QuadratureGrid>, lambda: f64, q: f64, count: usize, seed: u64, opts: &NewtonOptions) -> Result<Vec<SolveReport>> {
    let center = lambda.powf(1.0 / (q - 1.0));
    (0..count as u64)
        .into_par_iter()
        .map(|t| {
            let mut rng = rng_for(seed, t);
            let spread = rng.gen_range(0.1..0.6);
            let u0 = random_positive(grid, &mut rng, center, spread);
            newton_solve(lambda, q, &u0, opts)
        })
        .collect()
}

/// Gradient check of the quotient along one direction.
#[derive(Debug, Clone, Serialize)]
pub struct GradientCheck {
    pub analytic: f64,
    pub finite_difference: f64,
    pub rel_error: f64,
}

/// Compares `⟨∇Q(u), d⟩` with a central difference of `Q` along
/// `directions` random band-limited `d`.
pub fn gradient_fd_check(u: &SphereField, lambda: f64, q: f64, directions: usize, seed: u64) -> Result<Vec<GradientCheck>> {
    let grad = quotient_gradient(u, lambda, q)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let h = 1e-4;
    (0..directions)
        .map(|_| {
            let mean = rng.gen_range(-0.5..0.5);
            let d = SphereField::random(u.grid(), &mut rng, TRIAL_DEGREE, mean, 1.0);
            let d = d.scale(u.sup_norm() / d.sup_norm());
            let analytic = grad.inner(&d);
            let plus = quotient(&u.lincomb(1.0, &d, h), lambda, q)?;
            let minus = quotient(&u.lincomb(1.0, &d, -h), lambda, q)?;
            let finite_difference = (plus - minus) / (2.0 * h);
            let rel_error = (analytic - finite_difference).abs() / analytic.abs().max(finite_difference.abs()).max(1e-300);
            Ok(GradientCheck { analytic, finite_difference, rel_error })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::make_grid;

    #[test]
    fn corpora_are_deterministic() {
        let g = make_grid(8).unwrap();
        let a = sobolev_corpus(&g, 2.0, 0.5, 10, 7).unwrap();
        let b = sobolev_corpus(&g, 2.0, 0.5, 10, 7).unwrap();
        assert!(a.iter().zip(&b).all(|(x, y)| x.margin.to_bits() == y.margin.to_bits()));
        assert!(a.iter().all(|r| r.margin >= -1e-9));
    }

    #[test]
    fn gradient_matches_differences() {
        let g = make_grid(8).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let u = random_positive(&g, &mut rng, 1.0, 0.4);
        for c in gradient_fd_check(&u, 1.0, 2.5, 5, 9).unwrap() {
            assert!(c.rel_error < 1e-6, "{c:?}");
        }
    }
}

