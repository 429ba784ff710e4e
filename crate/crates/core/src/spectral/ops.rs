//! Operators, energies and inequality checks on `CP¹` (the unit sphere with
//! `□ = Δ/2` and `|∂u|² = |∇u|²/2`).

use std::f64::consts::PI;
use std::sync::Arc;

use nalgebra::{DMatrix, SymmetricEigen};
use serde::Serialize;

use super::field::SphereField;
use super::grid::{degree_order, QuadratureGrid};
use crate::{Error, Result};

/// `□f`: multiplies the `(l, m)` coefficient by `-l(l+1)/2`.
pub fn box_op(f: &SphereField) -> SphereField {
    f.map_spectral(|l, c| -((l * (l + 1)) as f64) / 2.0 * c)
}

/// `avg |∇f|²` from the coefficients, `Σ l(l+1) c²/(4π)`.
pub fn grad_energy(f: &SphereField) -> f64 {
    f.coeffs().iter().enumerate().map(|(i, c)| degree_order(i).0 as f64 * (degree_order(i).0 + 1) as f64 * c * c).sum::<f64>() / (4.0 * PI)
}

/// `avg |∇f|²` by quadrature of the pointwise gradient.
pub fn grad_energy_quadrature(f: &SphereField) -> f64 {
    f.grid().average(&f.grid().gradient_sq(f.coeffs()))
}

/// `∫|∂f|² + ∫ f □f`, which vanishes by integration by parts.
pub fn ibp_residual(f: &SphereField) -> f64 {
    0.5 * f.grid().integrate(&f.grid().gradient_sq(f.coeffs())) + f.inner(&box_op(f))
}

/// `|∫(□f)g - ∫f(□g)|` by quadrature.
pub fn self_adjointness_residual(f: &SphereField, g: &SphereField) -> f64 {
    (box_op(f).inner(g) - f.inner(&box_op(g))).abs()
}

/// Smallest eigenvalue of `-□` on mean-zero fields, measured from the
/// weak form: stiffness `½∫∇Yᵢ·∇Yⱼ` from pointwise gradients and mass
/// `∫YᵢYⱼ`, both by quadrature. Returns the eigenvalue and its multiplicity
/// within `1e-8`.
pub fn lambda1_rayleigh(grid: &Arc<QuadratureGrid>) -> Result<(f64, usize)> {
    let n = grid.n_coeffs() - 1;
    let mut basis_vals = Vec::with_capacity(n);
    let mut basis_grad = Vec::with_capacity(n);
    for i in 1..=n {
        let mut c = vec![0.0; grid.n_coeffs()];
        c[i] = 1.0;
        basis_vals.push(grid.synthesize(&c));
        basis_grad.push(grid.gradient(&c));
    }
    let mut k = DMatrix::zeros(n, n);
    let mut m = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let kij = 0.5 * (grid.integrate_product(&basis_grad[i].0, &basis_grad[j].0) + grid.integrate_product(&basis_grad[i].1, &basis_grad[j].1));
            let mij = grid.integrate_product(&basis_vals[i], &basis_vals[j]);
            k[(i, j)] = kij;
            k[(j, i)] = kij;
            m[(i, j)] = mij;
            m[(j, i)] = mij;
        }
    }
    let chol = m.cholesky().ok_or_else(|| Error::Numeric("mass matrix is not positive definite".into()))?;
    let l = chol.l();
    let linv = l.clone().try_inverse().ok_or_else(|| Error::Numeric("singular mass factor".into()))?;
    let a = &linv * k * linv.transpose();
    let a = (&a + a.transpose()) * 0.5;
    let eig = SymmetricEigen::new(a);
    let lo = eig.eigenvalues.iter().copied().fold(f64::INFINITY, f64::min);
    let mult = eig.eigenvalues.iter().filter(|&&e| (e - lo).abs() < 1e-8).count();
    Ok((lo, mult))
}

/// One evaluation of the averaged Sobolev inequality.
#[derive(Debug, Clone, Serialize)]
pub struct IneqReport {
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
    pub constant: f64,
    pub q: f64,
    pub trial: String,
}

/// `(avg|φ|^{q+1})^{2/(q+1)}` against `avg φ² + C·avg|∇φ|²`.
pub fn sobolev_check(phi: &SphereField, q: f64, c: f64, trial: &str) -> Result<IneqReport> {
    if !(q > 1.0) {
        return Err(Error::domain(format!("q must exceed 1, got {q}")));
    }
    if !(c > 0.0) {
        return Err(Error::domain(format!("constant must be positive, got {c}")));
    }
    if phi.l2_norm() == 0.0 {
        return Err(Error::domain("trial function is identically zero"));
    }
    let p = q + 1.0;
    let powered: Vec<f64> = phi.values().iter().map(|v| v.abs().powf(p)).collect();
    let lhs = phi.grid().average(&powered).powf(2.0 / p);
    let squares: Vec<f64> = phi.values().iter().map(|v| v * v).collect();
    let rhs = phi.grid().average(&squares) + c * grad_energy(phi);
    if !lhs.is_finite() || !rhs.is_finite() {
        return Err(Error::Numeric(format!("non-finite Sobolev sides: lhs {lhs}, rhs {rhs}")));
    }
    Ok(IneqReport { lhs, rhs, margin: rhs - lhs, constant: c, q, trial: trial.to_string() })
}

/// Second-order comparison along `φ = 1 + t f`.
#[derive(Debug, Clone, Serialize)]
pub struct PerturbationReport {
    /// `q·avg f²`
    pub lhs_t2: f64,
    /// `(2Cλ₁ + 1)·avg f²`
    pub rhs_t2: f64,
    /// Rayleigh quotient of `f`.
    pub lambda1: f64,
    /// `ψ''(0)/2` from central differences (Richardson-extrapolated).
    pub fitted_t2: f64,
    pub fit_rel_error: f64,
}

/// `t²` coefficients of both sides of the Sobolev inequality at `1 + t f`
/// for a first eigenfunction `f`.
pub fn perturbation_tcoeff(f: &SphereField, q: f64, c: f64) -> Result<PerturbationReport> {
    if !(q > 1.0) || !(c > 0.0) {
        return Err(Error::domain(format!("need q > 1 and C > 0, got q = {q}, C = {c}")));
    }
    let norm = f.l2_norm();
    if norm == 0.0 {
        return Err(Error::domain("f is identically zero"));
    }
    if f.mean().abs() > 1e-12 * norm {
        return Err(Error::domain(format!("f must have zero average, got {}", f.mean())));
    }
    let eig = box_op(f).lincomb(-1.0, f, -1.0).l2_norm();
    if eig > 1e-8 * norm {
        return Err(Error::domain(format!("f is not a first eigenfunction: |-□f - f| = {eig:e}")));
    }
    let avg_sq = f.l2_norm().powi(2) / (4.0 * PI);
    let lambda1 = 0.5 * grad_energy(f) / avg_sq;
    let lhs_t2 = q * avg_sq;
    let rhs_t2 = (2.0 * c * lambda1 + 1.0) * avg_sq;

    let p = q + 1.0;
    let psi = |t: f64| -> f64 {
        let vals: Vec<f64> = f.values().iter().map(|v| (1.0 + t * v).abs().powf(p)).collect();
        f.grid().average(&vals).powf(2.0 / p)
    };
    let second = |t: f64| (psi(t) - 2.0 * psi(0.0) + psi(-t)) / (t * t);
    let (d1, d2) = (second(1e-3), second(2e-3));
    let fitted_t2 = (4.0 * d1 - d2) / 3.0 / 2.0;
    let fit_rel_error = (fitted_t2 - lhs_t2).abs() / lhs_t2.abs();
    Ok(PerturbationReport { lhs_t2, rhs_t2, lambda1, fitted_t2, fit_rel_error })
}

fn require_positive(u: &SphereField) -> Result<()> {
    let lo = u.min_value();
    if !(lo > 0.0) {
        return Err(Error::domain(format!("u must be positive on the grid, min is {lo}")));
    }
    Ok(())
}

struct QuotientParts {
    numerator: f64,
    power_integral: f64,
}

fn quotient_parts(u: &SphereField, lambda: f64, q: f64) -> Result<QuotientParts> {
    if !(lambda > 0.0) || !(q > 1.0) {
        return Err(Error::domain(format!("need λ > 0 and q > 1, got λ = {lambda}, q = {q}")));
    }
    require_positive(u)?;
    let dirichlet = 0.5 * grad_energy(u) * 4.0 * PI;
    let mass = u.l2_norm().powi(2);
    let powered: Vec<f64> = u.values().iter().map(|v| v.powf(q + 1.0)).collect();
    Ok(QuotientParts { numerator: dirichlet + lambda * mass, power_integral: u.grid().integrate(&powered) })
}

/// `(∫|∂u|² + λ∫u²) / (∫u^{q+1})^{2/(q+1)}` with raw integrals.
pub fn quotient(u: &SphereField, lambda: f64, q: f64) -> Result<f64> {
    let p = quotient_parts(u, lambda, q)?;
    Ok(p.numerator / p.power_integral.powf(2.0 / (q + 1.0)))
}

/// `2(∫u^{q+1})^{-2/(q+1)}(-□u + λu - c u^q)` with `c` the ratio of the
/// numerator to `∫u^{q+1}`, projected onto the band. Its `L²` pairing with a
/// band-limited direction is the directional derivative of [`quotient`].
pub fn quotient_gradient(u: &SphereField, lambda: f64, q: f64) -> Result<SphereField> {
    let p = quotient_parts(u, lambda, q)?;
    let c = p.numerator / p.power_integral;
    let scale = 2.0 * p.power_integral.powf(-2.0 / (q + 1.0));
    let uq = u.map_pointwise(|v| v.powf(q))?;
    let linear = box_op(u).lincomb(-1.0, u, lambda);
    Ok(linear.lincomb(scale, &uq, -scale * c))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn grid(l: usize) -> Arc<QuadratureGrid> {
        Arc::new(QuadratureGrid::new(l).unwrap())
    }

    #[test]
    fn eigenvalues_of_box() {
        let g = grid(8);
        let z = SphereField::z(&g);
        assert!(box_op(&z).lincomb(1.0, &z, 1.0).l2_norm() < 1e-14);
        assert!(box_op(&SphereField::constant(&g, 2.0)).l2_norm() < 1e-14);
        let y2 = SphereField::from_fn(&g, |p| 3.0 * p[2] * p[2] - 1.0).unwrap();
        assert!(box_op(&y2).lincomb(1.0, &y2, 3.0).l2_norm() < 1e-12);
    }

    #[test]
    fn gradient_paths_agree() {
        let g = grid(10);
        let z = SphereField::z(&g);
        assert!((grad_energy(&z) - 2.0 / 3.0).abs() < 1e-12);
        assert!((grad_energy_quadrature(&z) - 2.0 / 3.0).abs() < 1e-12);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..5 {
            let f = SphereField::random(&g, &mut rng, 10, 0.2, 1.0);
            assert!((grad_energy(&f) - grad_energy_quadrature(&f)).abs() < 1e-9);
            assert!(ibp_residual(&f).abs() < 1e-10);
            let h = SphereField::random(&g, &mut rng, 10, 0.0, 1.0);
            assert!(self_adjointness_residual(&f, &h) < 1e-10);
        }
    }

    #[test]
    fn first_eigenvalue_measured() {
        let (l1, mult) = lambda1_rayleigh(&grid(6)).unwrap();
        assert!((l1 - 1.0).abs() < 1e-8, "{l1}");
        assert_eq!(mult, 3);
    }

    #[test]
    fn sobolev_examples() {
        let g = grid(8);
        let phi = SphereField::z(&g).lincomb(1.0, &SphereField::constant(&g, 1.0), 1.0);
        let r = sobolev_check(&phi, 2.0, 0.5, "1+z").unwrap();
        assert!((r.lhs - 2f64.powf(2.0 / 3.0)).abs() < 1e-12);
        assert!((r.rhs - 5.0 / 3.0).abs() < 1e-12);
        assert!((r.margin - 0.079265).abs() < 1e-6);
        let c = sobolev_check(&SphereField::constant(&g, 1.5), 3.0, 0.7, "const").unwrap();
        assert!(c.margin.abs() < 1e-13 && (c.lhs - 2.25).abs() < 1e-13);
        assert!(sobolev_check(&phi, 1.0, 0.5, "").is_err());
        assert!(sobolev_check(&SphereField::constant(&g, 0.0), 2.0, 0.5, "").is_err());
    }

    #[test]
    fn perturbation_examples() {
        let g = grid(8);
        let z = SphereField::z(&g);
        let r = perturbation_tcoeff(&z, 2.0, 0.5).unwrap();
        assert!((r.lhs_t2 - 2.0 / 3.0).abs() < 1e-12 && (r.rhs_t2 - 2.0 / 3.0).abs() < 1e-12);
        assert!(r.fit_rel_error < 1e-6, "{}", r.fit_rel_error);
        let r = perturbation_tcoeff(&z, 2.0, 0.75).unwrap();
        assert!((r.rhs_t2 - 5.0 / 6.0).abs() < 1e-12);
        let r = perturbation_tcoeff(&z, 1.0 + 1e-9, 0.5).unwrap();
        assert!((r.lhs_t2 - 1.0 / 3.0).abs() < 1e-9);
        let y2 = SphereField::from_fn(&g, |p| 3.0 * p[2] * p[2] - 1.0).unwrap();
        assert!(perturbation_tcoeff(&y2, 2.0, 0.5).is_err());
    }

    #[test]
    fn quotient_values() {
        let g = grid(8);
        for q in [1.5, 2.0, 3.0] {
            let one = SphereField::constant(&g, 1.0);
            let want = 0.7 * (4.0 * PI).powf((q - 1.0) / (q + 1.0));
            assert!((quotient(&one, 0.7, q).unwrap() - want).abs() < 1e-12 * want);
        }
        let u = SphereField::z(&g).lincomb(0.1, &SphereField::constant(&g, 1.0), 1.0);
        let a = quotient(&u, 1.0, 2.0).unwrap();
        // scale invariance: the numerator and denominator are both of degree two
        assert!((quotient(&u.scale(2.0), 1.0, 2.0).unwrap() - a).abs() < 1e-13 * a);
        let fine = Arc::new(QuadratureGrid::new(16).unwrap());
        let uf = SphereField::z(&fine).lincomb(0.1, &SphereField::constant(&fine, 1.0), 1.0);
        assert!((quotient(&uf, 1.0, 2.0).unwrap() - a).abs() < 1e-8);
        assert!(quotient(&SphereField::z(&g), 1.0, 2.0).is_err());
    }

    #[test]
    fn constants_are_critical() {
        let g = grid(6);
        let grad = quotient_gradient(&SphereField::constant(&g, 1.3), 0.8, 2.5).unwrap();
        assert!(grad.l2_norm() < 1e-13);
    }
}
