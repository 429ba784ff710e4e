//! Newton iteration for `-□u + λu = u^q` in harmonic space.

use serde::Serialize;

use super::field::SphereField;
use super::ops::box_op;
use crate::{Error, Result};

const MAX_HALVINGS: u32 = 30;

/// Settings for [`newton_solve`].
#[derive(Debug, Clone, Copy)]
pub struct NewtonOptions {
    /// Sup-norm target for the projected residual.
    pub tol: f64,
    pub max_iters: usize,
    /// Relative residual of the inner linear solve.
    pub linear_tol: f64,
}

impl Default for NewtonOptions {
    fn default() -> Self {
        NewtonOptions { tol: 1e-10, max_iters: 100, linear_tol: 1e-10 }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SolveReport {
    pub converged: bool,
    pub iterations: usize,
    /// Sup norm over the grid of the band-projected residual.
    pub residual: f64,
    pub halvings: u32,
    pub linear_iterations: usize,
    pub is_constant: bool,
    /// Average of the solution when it is constant.
    pub constant: Option<f64>,
    /// `λ^{1/(q-1)}`.
    pub expected_constant: f64,
    pub min_value: f64,
    pub message: Option<String>,
    #[serde(skip)]
    pub solution: SphereField,
}

fn residual(u: &SphereField, lambda: f64, q: f64) -> Result<SphereField> {
    let uq = u.map_pointwise(|v| v.powf(q))?;
    Ok(box_op(u).lincomb(-1.0, u, lambda).lincomb(1.0, &uq, -1.0))
}

/// Restarted GMRES for `A x = b` with a matrix-free `A`.
///
/// Returns the solution and the number of operator applications.
pub fn gmres(apply: impl Fn(&[f64]) -> Vec<f64>, b: &[f64], rel_tol: f64, restart: usize, max_iters: usize) -> Result<(Vec<f64>, usize)> {
    let n = b.len();
    let dot = |x: &[f64], y: &[f64]| x.iter().zip(y).map(|(a, b)| a * b).sum::<f64>();
    let norm = |x: &[f64]| dot(x, x).sqrt();
    let bnorm = norm(b);
    let mut x = vec![0.0; n];
    if bnorm == 0.0 {
        return Ok((x, 0));
    }
    let target = rel_tol * bnorm;
    let mut applied = 0;
    while applied < max_iters {
        let ax = apply(&x);
        applied += 1;
        let r: Vec<f64> = b.iter().zip(&ax).map(|(b, a)| b - a).collect();
        let beta = norm(&r);
        if beta <= target {
            return Ok((x, applied));
        }
        let m = restart.min(n);
        let mut v: Vec<Vec<f64>> = vec![r.iter().map(|c| c / beta).collect()];
        let mut h = vec![vec![0.0; m]; m + 1];
        let (mut cs, mut sn) = (vec![0.0; m], vec![0.0; m]);
        let mut g = vec![0.0; m + 1];
        g[0] = beta;
        let mut k_used = 0;
        for k in 0..m {
            let mut w = apply(&v[k]);
            applied += 1;
            // modified Gram-Schmidt
            for (i, vi) in v.iter().enumerate() {
                h[i][k] = dot(&w, vi);
                for (wj, vj) in w.iter_mut().zip(vi) {
                    *wj -= h[i][k] * vj;
                }
            }
            let next_norm = norm(&w);
            h[k + 1][k] = next_norm;
            for i in 0..k {
                let t = cs[i] * h[i][k] + sn[i] * h[i + 1][k];
                h[i + 1][k] = -sn[i] * h[i][k] + cs[i] * h[i + 1][k];
                h[i][k] = t;
            }
            let r = h[k][k].hypot(h[k + 1][k]);
            if r == 0.0 {
                return Err(Error::Numeric("GMRES breakdown on a singular operator".into()));
            }
            cs[k] = h[k][k] / r;
            sn[k] = h[k + 1][k] / r;
            h[k][k] = r;
            h[k + 1][k] = 0.0;
            g[k + 1] = -sn[k] * g[k];
            g[k] *= cs[k];
            k_used = k + 1;
            // a zero next vector means the Krylov space is invariant and the solve is exact
            if g[k + 1].abs() <= target || applied >= max_iters || next_norm == 0.0 {
                break;
            }
            v.push(w.iter().map(|c| c / next_norm).collect());
        }
        // back substitution
        let mut y = vec![0.0; k_used];
        for i in (0..k_used).rev() {
            let s: f64 = (i + 1..k_used).map(|j| h[i][j] * y[j]).sum();
            y[i] = (g[i] - s) / h[i][i];
        }
        for (i, yi) in y.iter().enumerate() {
            for (xj, vj) in x.iter_mut().zip(&v[i]) {
                *xj += yi * vj;
            }
        }
        if g[k_used].abs() <= target {
            return Ok((x, applied));
        }
    }
    Err(Error::Numeric(format!("GMRES did not reach relative residual {rel_tol:e} in {max_iters} applications")))
}

/// Solves `-□u + λu = u^q` from `u0 > 0`.
///
/// Steps that leave the positive cone or fail to reduce the `L²` residual
/// are halved; after 30 halvings, or `max_iters` Newton steps, a
/// non-convergence report is returned rather than an error.
pub fn newton_solve(lambda: f64, q: f64, u0: &SphereField, opts: &NewtonOptions) -> Result<SolveReport> {
    if !(lambda > 0.0) || !(q > 1.0) {
        return Err(Error::domain(format!("need λ > 0 and q > 1, got λ = {lambda}, q = {q}")));
    }
    if !(u0.min_value() > 0.0) {
        return Err(Error::domain(format!("initial guess must be positive, min is {}", u0.min_value())));
    }
    let grid = u0.grid().clone();
    let expected = lambda.powf(1.0 / (q - 1.0));
    let mut u = u0.clone();
    let mut r = residual(&u, lambda, q)?;
    let mut rnorm = r.sup_norm();
    let (mut iterations, mut halvings, mut linear) = (0, 0u32, 0);
    let mut message = None;
    while rnorm >= opts.tol {
        if iterations == opts.max_iters {
            message = Some(format!("no convergence after {iterations} Newton steps"));
            break;
        }
        iterations += 1;
        let weight: Vec<f64> = u.values().iter().map(|v| q * v.powf(q - 1.0)).collect();
        let jac = |x: &[f64]| -> Vec<f64> {
            let vals = grid.synthesize(x);
            let prod: Vec<f64> = vals.iter().zip(&weight).map(|(a, w)| a * w).collect();
            let nonlinear = grid.analyze(&prod);
            x.iter()
                .enumerate()
                .zip(nonlinear)
                .map(|((i, &c), nl)| {
                    let l = super::grid::degree_order(i).0 as f64;
                    (l * (l + 1.0) / 2.0 + lambda) * c - nl
                })
                .collect()
        };
        // right preconditioner: the Jacobian with u^{q-1} replaced by its mean
        let shift = lambda - weight.iter().sum::<f64>() / weight.len() as f64;
        let diag: Vec<f64> = (0..grid.n_coeffs())
            .map(|i| {
                let l = super::grid::degree_order(i).0 as f64;
                let d = l * (l + 1.0) / 2.0 + shift;
                d.signum() * d.abs().max(0.1)
            })
            .collect();
        let rhs: Vec<f64> = r.coeffs().iter().map(|c| -c).collect();
        let precond = |y: &[f64]| -> Vec<f64> { y.iter().zip(&diag).map(|(v, d)| v / d).collect() };
        let (y, used) = gmres(|y: &[f64]| jac(&precond(y)), &rhs, opts.linear_tol, 80, 4000)?;
        linear += used;
        let delta = SphereField::from_coeffs(&grid, precond(&y))?;
        // backtracking on the L² residual, for which the Newton step is a descent direction
        let merit = r.l2_norm();
        let mut t = 1.0;
        let mut accepted = None;
        for _ in 0..=MAX_HALVINGS {
            let cand = u.lincomb(1.0, &delta, t);
            if cand.min_value() > 0.0 {
                let rc = residual(&cand, lambda, q)?;
                if rc.l2_norm() <= (1.0 - 1e-4 * t) * merit || rc.sup_norm() < opts.tol {
                    let rn = rc.sup_norm();
                    accepted = Some((cand, rc, rn));
                    break;
                }
            }
            t *= 0.5;
            halvings += 1;
        }
        match accepted {
            Some((cand, rc, rn)) => {
                u = cand;
                r = rc;
                rnorm = rn;
            }
            None => {
                message = Some(format!("step rejected after {MAX_HALVINGS} halvings"));
                break;
            }
        }
    }
    let converged = rnorm < opts.tol;
    let avg = u.mean();
    let spread = u.values().iter().fold(0.0f64, |m, v| m.max((v - avg).abs()));
    let is_constant = converged && spread < 10.0 * opts.tol;
    Ok(SolveReport {
        converged,
        iterations,
        residual: rnorm,
        halvings,
        linear_iterations: linear,
        is_constant,
        constant: is_constant.then_some(avg),
        expected_constant: expected,
        min_value: u.min_value(),
        message,
        solution: u,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::make_grid;

    #[test]
    fn gmres_solves_small_system() {
        let a = [[4.0, 1.0, 0.0], [1.0, 3.0, -1.0], [0.0, 2.0, 5.0]];
        let apply = |x: &[f64]| (0..3).map(|i| (0..3).map(|j| a[i][j] * x[j]).sum()).collect::<Vec<f64>>();
        let b = [1.0, 2.0, 3.0];
        let (x, _) = gmres(apply, &b, 1e-12, 2, 100).unwrap();
        let ax = apply(&x);
        for (l, r) in ax.iter().zip(&b) {
            assert!((l - r).abs() < 1e-10);
        }
    }

    #[test]
    fn exact_constant_needs_no_steps() {
        let g = make_grid(8).unwrap();
        let r = newton_solve(0.4, 2.0, &SphereField::constant(&g, 0.4), &NewtonOptions::default()).unwrap();
        assert!(r.converged && r.iterations == 0 && r.residual < 1e-15);
        assert_eq!(r.constant, Some(0.4));
    }

    #[test]
    fn converges_from_perturbation() {
        let g = make_grid(8).unwrap();
        let u0 = SphereField::z(&g).lincomb(0.1, &SphereField::constant(&g, 0.4), 1.0);
        let r = newton_solve(0.4, 2.0, &u0, &NewtonOptions::default()).unwrap();
        assert!(r.converged && r.is_constant, "{r:?}");
        assert!((r.constant.unwrap() - 0.4).abs() < 1e-8);
    }

    #[test]
    fn bad_inputs() {
        let g = make_grid(4).unwrap();
        let opts = NewtonOptions::default();
        assert!(newton_solve(0.4, 2.0, &SphereField::z(&g), &opts).is_err());
        assert!(newton_solve(-1.0, 2.0, &SphereField::constant(&g, 1.0), &opts).is_err());
        let r = newton_solve(0.4, 2.0, &SphereField::constant(&g, 3.0), &NewtonOptions { max_iters: 1, ..opts }).unwrap();
        assert!(!r.converged && r.message.is_some());
    }
}
