//! Gauss-Legendre × equispaced quadrature on the unit sphere and the real
//! spherical-harmonic transform built on it.

use std::f64::consts::PI;
use std::num::NonZeroUsize;

use gauss_quad::legendre::GaussLegendre;

use crate::{Error, Result};

/// Flat index of the real harmonic `(l, m)`, `-l ≤ m ≤ l`. Negative `m`
/// stands for the `sin(|m|φ)` member.
pub fn index(l: usize, m: i64) -> usize {
    ((l * l + l) as i64 + m) as usize
}

/// Inverse of [`index`].
pub fn degree_order(i: usize) -> (usize, i64) {
    let l = (i as f64).sqrt() as usize;
    let l = if (l + 1) * (l + 1) <= i { l + 1 } else { l };
    (l, i as i64 - (l * l + l) as i64)
}

/// Quadrature nodes with precomputed harmonic tables.
///
/// Immutable after construction; share it behind an `Arc`.
#[derive(Debug)]
pub struct QuadratureGrid {
    band: usize,
    oversample: usize,
    mu: Vec<f64>,
    weights: Vec<f64>,
    nlon: usize,
    /// `cos(mφ_j)`, `sin(mφ_j)` for `0 ≤ m ≤ band`.
    cos: Vec<Vec<f64>>,
    sin: Vec<Vec<f64>>,
    /// Orthonormal associated Legendre values `P̄_l^m(μ_i)`, per latitude,
    /// stored at `index(l, m)` for `m ≥ 0`.
    plm: Vec<Vec<f64>>,
    /// `∂θ P̄_l^m(μ_i)`.
    dplm: Vec<Vec<f64>>,
}

impl QuadratureGrid {
    /// Grid for band limit `band` with the default oversampling factor 2.
    pub fn new(band: usize) -> Result<Self> {
        Self::with_oversampling(band, 2)
    }

    /// `band·s + 1` Gauss-Legendre latitudes and `2·band·s + 1` longitudes.
    /// With `s = 1` this is the minimal exact grid for products of two
    /// band-limited fields.
    pub fn with_oversampling(band: usize, oversample: usize) -> Result<Self> {
        if band < 2 {
            return Err(Error::domain(format!("band limit must be at least 2, got {band}")));
        }
        if oversample == 0 {
            return Err(Error::domain("oversampling factor must be positive"));
        }
        let fine = band * oversample;
        let nlat = fine + 1;
        let nlon = 2 * fine + 1;
        let rule = GaussLegendre::new(NonZeroUsize::new(nlat).expect("nlat > 0"));
        let (mu, weights): (Vec<f64>, Vec<f64>) = rule.as_node_weight_pairs().iter().map(|&(x, w)| (x, 2.0 * PI * w / nlon as f64)).unzip();
        let phi: Vec<f64> = (0..nlon).map(|j| 2.0 * PI * j as f64 / nlon as f64).collect();
        let cos = (0..=band).map(|m| phi.iter().map(|p| (m as f64 * p).cos()).collect()).collect();
        let sin = (0..=band).map(|m| phi.iter().map(|p| (m as f64 * p).sin()).collect()).collect();
        let (plm, dplm) = mu.iter().map(|&x| legendre_table(band, x)).unzip();
        Ok(QuadratureGrid { band, oversample, mu, weights, nlon, cos, sin, plm, dplm })
    }

    pub fn band(&self) -> usize {
        self.band
    }

    pub fn oversample(&self) -> usize {
        self.oversample
    }

    pub fn nlat(&self) -> usize {
        self.mu.len()
    }

    pub fn nlon(&self) -> usize {
        self.nlon
    }

    /// Number of grid points.
    pub fn len(&self) -> usize {
        self.mu.len() * self.nlon
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Number of real harmonics up to the band limit.
    pub fn n_coeffs(&self) -> usize {
        (self.band + 1) * (self.band + 1)
    }

    /// Latitude nodes `μ = cos θ`.
    pub fn mu(&self) -> &[f64] {
        &self.mu
    }

    /// Area weight of a point on latitude `i` (the same for every longitude).
    pub fn weight(&self, i: usize) -> f64 {
        self.weights[i]
    }

    pub fn total_area(&self) -> f64 {
        self.weights.iter().sum::<f64>() * self.nlon as f64
    }

    /// Cartesian coordinates of every grid point, latitude-major.
    pub fn points(&self) -> impl Iterator<Item = [f64; 3]> + '_ {
        self.mu.iter().flat_map(move |&z| {
            let s = (1.0 - z * z).sqrt();
            (0..self.nlon).map(move |j| {
                let p = 2.0 * PI * j as f64 / self.nlon as f64;
                [s * p.cos(), s * p.sin(), z]
            })
        })
    }

    /// `∫ f dA` of grid values.
    pub fn integrate(&self, values: &[f64]) -> f64 {
        values.chunks(self.nlon).zip(&self.weights).map(|(row, w)| w * row.iter().sum::<f64>()).sum()
    }

    /// `∫ f g dA` of grid values.
    pub fn integrate_product(&self, f: &[f64], g: &[f64]) -> f64 {
        f.chunks(self.nlon)
            .zip(g.chunks(self.nlon))
            .zip(&self.weights)
            .map(|((a, b), w)| w * a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>())
            .sum()
    }

    /// Average over the sphere.
    pub fn average(&self, values: &[f64]) -> f64 {
        self.integrate(values) / (4.0 * PI)
    }

    /// Grid values of `Σ c_lm Y_lm`.
    pub fn synthesize(&self, coeffs: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.len()];
        let mut cm = vec![0.0; self.band + 1];
        let mut sm = vec![0.0; self.band + 1];
        for (i, row) in out.chunks_mut(self.nlon).enumerate() {
            self.fold_latitude(&self.plm[i], coeffs, &mut cm, &mut sm);
            self.write_row(row, &cm, &sm);
        }
        out
    }

    /// Coefficients of the quadrature projection onto harmonics of degree
    /// at most the band limit.
    pub fn analyze(&self, values: &[f64]) -> Vec<f64> {
        let mut coeffs = vec![0.0; self.n_coeffs()];
        let sqrt2 = 2f64.sqrt();
        for (i, row) in values.chunks(self.nlon).enumerate() {
            let w = self.weights[i];
            let p = &self.plm[i];
            for m in 0..=self.band {
                let a: f64 = row.iter().zip(&self.cos[m]).map(|(f, c)| f * c).sum::<f64>() * w;
                let b: f64 = row.iter().zip(&self.sin[m]).map(|(f, s)| f * s).sum::<f64>() * w;
                for l in m..=self.band {
                    let pl = p[index(l, m as i64)];
                    if m == 0 {
                        coeffs[index(l, 0)] += pl * a;
                    } else {
                        coeffs[index(l, m as i64)] += sqrt2 * pl * a;
                        coeffs[index(l, -(m as i64))] += sqrt2 * pl * b;
                    }
                }
            }
        }
        coeffs
    }

    /// Pointwise `|∇f|²` from the harmonic coefficients, using the
    /// Legendre derivative tables rather than the eigenvalue rule.
    pub fn gradient_sq(&self, coeffs: &[f64]) -> Vec<f64> {
        let (t, p) = self.gradient(coeffs);
        t.iter().zip(&p).map(|(a, b)| a * a + b * b).collect()
    }

    /// Orthonormal-frame components `(∂θ f, ∂φ f / sin θ)` at every point.
    pub fn gradient(&self, coeffs: &[f64]) -> (Vec<f64>, Vec<f64>) {
        let mut gt = vec![0.0; self.len()];
        let mut gp = vec![0.0; self.len()];
        let (mut tc, mut ts) = (vec![0.0; self.band + 1], vec![0.0; self.band + 1]);
        let (mut pc, mut ps) = (vec![0.0; self.band + 1], vec![0.0; self.band + 1]);
        let sqrt2 = 2f64.sqrt();
        for (i, (rt, rp)) in gt.chunks_mut(self.nlon).zip(gp.chunks_mut(self.nlon)).enumerate() {
            let sin_theta = (1.0 - self.mu[i] * self.mu[i]).sqrt();
            self.fold_latitude(&self.dplm[i], coeffs, &mut tc, &mut ts);
            self.fold_latitude(&self.plm[i], coeffs, &mut pc, &mut ps);
            for j in 0..self.nlon {
                let mut ft = tc[0];
                let mut fp = 0.0;
                for m in 1..=self.band {
                    let (c, s) = (self.cos[m][j], self.sin[m][j]);
                    ft += sqrt2 * (tc[m] * c + ts[m] * s);
                    fp += sqrt2 * m as f64 * (ps[m] * c - pc[m] * s);
                }
                rt[j] = ft;
                rp[j] = fp / sin_theta;
            }
        }
        (gt, gp)
    }

    /// Sums `Σ_l c_lm table_l^m` for each order `m` on one latitude.
    fn fold_latitude(&self, table: &[f64], coeffs: &[f64], cm: &mut [f64], sm: &mut [f64]) {
        for m in 0..=self.band {
            let (mut c, mut s) = (0.0, 0.0);
            for l in m..=self.band {
                let p = table[index(l, m as i64)];
                c += coeffs[index(l, m as i64)] * p;
                if m > 0 {
                    s += coeffs[index(l, -(m as i64))] * p;
                }
            }
            cm[m] = c;
            sm[m] = s;
        }
    }

    fn write_row(&self, row: &mut [f64], cm: &[f64], sm: &[f64]) {
        let sqrt2 = 2f64.sqrt();
        for (j, out) in row.iter_mut().enumerate() {
            let mut v = cm[0];
            for m in 1..=self.band {
                v += sqrt2 * (cm[m] * self.cos[m][j] + sm[m] * self.sin[m][j]);
            }
            *out = v;
        }
    }
}

/// Orthonormal `P̄_l^m(μ)` (so that `P̄·{1, √2 cos, √2 sin}` are
/// orthonormal on the unit sphere) and `∂θ P̄_l^m`, for `m ≥ 0`.
fn legendre_table(band: usize, mu: f64) -> (Vec<f64>, Vec<f64>) {
    let n = (band + 1) * (band + 1);
    let mut p = vec![0.0; n];
    let mut dp = vec![0.0; n];
    let s = (1.0 - mu * mu).sqrt();
    let mut pmm = (1.0 / (4.0 * PI)).sqrt();
    for m in 0..=band {
        if m > 0 {
            pmm *= ((2 * m + 1) as f64 / (2 * m) as f64).sqrt() * s;
        }
        p[index(m, m as i64)] = pmm;
        if m < band {
            p[index(m + 1, m as i64)] = ((2 * m + 3) as f64).sqrt() * mu * pmm;
        }
        for l in m + 2..=band {
            let (lf, mf) = (l as f64, m as f64);
            let a = ((4.0 * lf * lf - 1.0) / (lf * lf - mf * mf)).sqrt();
            let b = (((lf - 1.0).powi(2) - mf * mf) / (4.0 * (lf - 1.0).powi(2) - 1.0)).sqrt();
            p[index(l, m as i64)] = a * (mu * p[index(l - 1, m as i64)] - b * p[index(l - 2, m as i64)]);
        }
    }
    // (1 - μ²) dP̄_l^m/dμ = l μ P̄_l^m - √((2l+1)/(2l-1) (l² - m²)) P̄_{l-1}^m, and ∂θ = -sinθ ∂μ
    for m in 0..=band {
        for l in m..=band {
            let (lf, mf) = (l as f64, m as f64);
            let lower = if l > m {
                ((2.0 * lf + 1.0) / (2.0 * lf - 1.0) * (lf * lf - mf * mf)).sqrt() * p[index(l - 1, m as i64)]
            } else {
                0.0
            };
            dp[index(l, m as i64)] = -(lf * mu * p[index(l, m as i64)] - lower) / s;
        }
    }
    (p, dp)
}
