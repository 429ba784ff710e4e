//! Band-limited scalar fields on the sphere.

use std::f64::consts::PI;
use std::sync::Arc;

use rand::Rng;
use rand_distr::StandardNormal;

use super::grid::{degree_order, index, QuadratureGrid};
use crate::{Error, Result};

/// A band-limited field held both as harmonic coefficients and as values on
/// the quadrature grid. Every constructor keeps the two in step, so there is
/// no stale representation to track.
#[derive(Debug, Clone)]
pub struct SphereField {
    grid: Arc<QuadratureGrid>,
    coeffs: Vec<f64>,
    values: Vec<f64>,
}

impl SphereField {
    pub fn from_coeffs(grid: &Arc<QuadratureGrid>, coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.len() != grid.n_coeffs() {
            return Err(Error::domain(format!("expected {} coefficients, got {}", grid.n_coeffs(), coeffs.len())));
        }
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::Numeric("non-finite harmonic coefficient".into()));
        }
        let values = grid.synthesize(&coeffs);
        Ok(SphereField { grid: grid.clone(), coeffs, values })
    }

    /// Projection of grid values onto the band.
    pub fn project(grid: &Arc<QuadratureGrid>, values: &[f64]) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::domain(format!("expected {} grid values, got {}", grid.len(), values.len())));
        }
        Self::from_coeffs(grid, grid.analyze(values))
    }

    /// Projection of `f(x, y, z)` sampled on the grid.
    pub fn from_fn(grid: &Arc<QuadratureGrid>, f: impl Fn([f64; 3]) -> f64) -> Result<Self> {
        let values: Vec<f64> = grid.points().map(f).collect();
        Self::project(grid, &values)
    }

    pub fn constant(grid: &Arc<QuadratureGrid>, c: f64) -> Self {
        let mut coeffs = vec![0.0; grid.n_coeffs()];
        coeffs[0] = c * (4.0 * PI).sqrt();
        SphereField { grid: grid.clone(), coeffs, values: vec![c; grid.len()] }
    }

    /// The degree-one field `z = cos θ`.
    pub fn z(grid: &Arc<QuadratureGrid>) -> Self {
        let mut coeffs = vec![0.0; grid.n_coeffs()];
        coeffs[index(1, 0)] = (4.0 * PI / 3.0).sqrt();
        Self::from_coeffs(grid, coeffs).expect("valid size")
    }

    /// Gaussian coefficients with standard deviation `amplitude/(1 + l)²`
    /// on degrees `1..=max_degree`, plus `mean` on the constant mode.
    pub fn random(grid: &Arc<QuadratureGrid>, rng: &mut impl Rng, max_degree: usize, mean: f64, amplitude: f64) -> Self {
        let top = max_degree.min(grid.band());
        let mut coeffs = vec![0.0; grid.n_coeffs()];
        coeffs[0] = mean * (4.0 * PI).sqrt();
        for (i, c) in coeffs.iter_mut().enumerate().skip(1) {
            let (l, _) = degree_order(i);
            if l <= top {
                let g: f64 = rng.sample(StandardNormal);
                *c = g * amplitude / ((1 + l) * (1 + l)) as f64;
            }
        }
        Self::from_coeffs(grid, coeffs).expect("finite draws")
    }

    pub fn grid(&self) -> &Arc<QuadratureGrid> {
        &self.grid
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn coeff(&self, l: usize, m: i64) -> f64 {
        self.coeffs[index(l, m)]
    }

    /// Average computed from the constant mode.
    pub fn mean(&self) -> f64 {
        self.coeffs[0] / (4.0 * PI).sqrt()
    }

    /// Average computed by quadrature.
    pub fn average(&self) -> f64 {
        self.grid.average(&self.values)
    }

    pub fn integral(&self) -> f64 {
        self.grid.integrate(&self.values)
    }

    /// `∫ f g dA` by quadrature.
    pub fn inner(&self, other: &SphereField) -> f64 {
        self.grid.integrate_product(&self.values, &other.values)
    }

    pub fn min_value(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max_value(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    /// `sup |f|` over the grid.
    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Applies `c ↦ g(l, c)` to every coefficient.
    pub fn map_spectral(&self, g: impl Fn(usize, f64) -> f64) -> Self {
        let coeffs = self.coeffs.iter().enumerate().map(|(i, &c)| g(degree_order(i).0, c)).collect();
        Self::from_coeffs(&self.grid, coeffs).expect("same size")
    }

    /// Projection of the pointwise image `g(f)`.
    pub fn map_pointwise(&self, g: impl Fn(f64) -> f64) -> Result<Self> {
        let values: Vec<f64> = self.values.iter().map(|&v| g(v)).collect();
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::Numeric("pointwise map produced a non-finite value".into()));
        }
        Self::project(&self.grid, &values)
    }

    /// `a·self + b·other`.
    pub fn lincomb(&self, a: f64, other: &SphereField, b: f64) -> Self {
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(x, y)| a * x + b * y).collect();
        let values = self.values.iter().zip(&other.values).map(|(x, y)| a * x + b * y).collect();
        SphereField { grid: self.grid.clone(), coeffs, values }
    }

    pub fn scale(&self, a: f64) -> Self {
        self.lincomb(a, self, 0.0)
    }

    /// Coefficient-space Euclidean norm, equal to the `L²` norm.
    pub fn l2_norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c * c).sum::<f64>().sqrt()
    }
}
