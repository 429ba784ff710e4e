//! Closed-form Sobolev constants, the admissible `k` interval and the
//! thresholds derived from them.
//!
//! Every formula is evaluated in double-double arithmetic ([`Dd`]) and
//! rounded to `f64` only at the end. Nested radicals such as
//! `√((n+1)(n+1-(n-1)q))` lose digits near the critical exponent otherwise.
//!
//! Conventions: `n` is the complex dimension, `q` the exponent and `m = 2n`
//! the real dimension. The Ricci normalization is `Ric(ω) ≥ ω`; the
//! Riemannian constant is reported both raw (`Ric ≥ (m-1)g`) and bridged to
//! that normalization.

use serde::Serialize;

use crate::dd::Dd;
use crate::error::{Error, Result};

/// Relative slack used when deciding whether a value sits on a closed
/// boundary (the critical exponent, an endpoint of the `k` interval, an
/// endpoint of the `x` range).
pub const BOUNDARY_TOL: f64 = 1e-12;

/// Number of grid points scanned by [`optimize_k`] before polishing.
pub const OPTIMIZE_GRID_POINTS: usize = 10_000;

/// Maximizers of `F` within this distance of the best value are treated as
/// ties; the smallest `k` wins.
pub const OPTIMIZE_TIE_TOL: f64 = 1e-9;

fn dd(x: f64) -> Dd {
    Dd::new(x)
}

fn to_f64(x: Dd) -> f64 {
    x.to_f64()
}

/// Square root that maps the tiny negative radicands produced by rounding at
/// a degenerate boundary to zero.
fn sqrt_clamped(x: Dd) -> Dd {
    if x.hi() < 0.0 {
        Dd::ZERO
    } else {
        x.sqrt()
    }
}

/// Complex dimension `n`, exponent `q` and the derived real dimension `m`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Dimensions {
    n: u32,
    q: f64,
}

impl Dimensions {
    /// Validates `n ≥ 1` and `q > 1`. The upper bound on `q` is checked by
    /// the operations that need it.
    pub fn new(n: u32, q: f64) -> Result<Self> {
        if n < 1 {
            return Err(Error::domain(format!("complex dimension n = {n} must be at least 1")));
        }
        if !q.is_finite() || q <= 1.0 {
            return Err(Error::domain(format!("exponent q = {q} must satisfy q > 1")));
        }
        Ok(Self { n, q })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    /// Real dimension `m = 2n`.
    pub fn m(&self) -> u32 {
        2 * self.n
    }

    /// `(n+1)/(n-1)`, or `None` when `n = 1` (no upper bound on `q`).
    pub fn critical_exponent(&self) -> Option<f64> {
        (self.n >= 2).then(|| (self.n as f64 + 1.0) / (self.n as f64 - 1.0))
    }

    /// True when `q` sits on the critical exponent (within [`BOUNDARY_TOL`]).
    pub fn is_boundary(&self) -> bool {
        self.critical_exponent()
            .map(|c| (self.q - c).abs() <= BOUNDARY_TOL * c)
            .unwrap_or(false)
    }

    /// `q ≤ (n+1)/(n-1)` for `n ≥ 2`; the endpoint itself is admitted.
    pub fn require_admissible(&self) -> Result<()> {
        if let Some(c) = self.critical_exponent() {
            if self.q > c * (1.0 + BOUNDARY_TOL) {
                return Err(Error::domain(format!(
                    "q = {} exceeds the critical exponent (n+1)/(n-1) = {c} for n = {}",
                    self.q, self.n
                )));
            }
        }
        Ok(())
    }

    fn require_interval_range(&self) -> Result<()> {
        if self.n == 1 {
            return Err(Error::domain(
                "interval unbounded at n = 1; use limit semantics",
            ));
        }
        self.require_admissible()
    }

    fn nf(&self) -> Dd {
        dd(self.n as f64)
    }

    fn qf(&self) -> Dd {
        dd(self.q)
    }
}

/// Admissible `(n, q)` sample: for every `n` in `ns`, `per_n` exponents
/// strictly inside `(1, (n+1)/(n-1))`. For `n = 1` the exponents are spread
/// over `(1, 6)`.
pub fn admissible_grid(ns: impl IntoIterator<Item = u32>, per_n: usize) -> Vec<Dimensions> {
    let mut out = Vec::new();
    for n in ns {
        let top = if n == 1 { 6.0 } else { (n as f64 + 1.0) / (n as f64 - 1.0) };
        for j in 0..per_n {
            let t = (j as f64 + 1.0) / (per_n as f64 + 1.0);
            let q = 1.0 + (top - 1.0) * t;
            out.push(Dimensions::new(n, q).expect("grid point is admissible"));
        }
    }
    out
}

/// The admissible range of the parameter `k`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KInterval {
    pub k_lo: f64,
    pub k_hi: f64,
}

impl KInterval {
    /// Membership with a relative slack of [`BOUNDARY_TOL`] at both ends.
    pub fn contains(&self, k: f64) -> bool {
        k >= self.k_lo * (1.0 - BOUNDARY_TOL) && k <= self.k_hi * (1.0 + BOUNDARY_TOL)
    }

    pub fn product(&self) -> f64 {
        self.k_lo * self.k_hi
    }

    pub fn is_degenerate(&self) -> bool {
        (self.k_hi - self.k_lo).abs() <= BOUNDARY_TOL * self.k_hi
    }
}

/// Sobolev constant
/// `C_S = (q-1)(2n+q+2-2√((n+1)(n+1-(n-1)q)))/(2qn)`.
pub fn cs_bm(dims: Dimensions) -> Result<f64> {
    dims.require_admissible()?;
    let (n, q) = (dims.nf(), dims.qf());
    let rad = (n + 1.0) * (n + 1.0 - (n - 1.0) * q);
    let val = (q - 1.0) * (n * 2.0 + q + 2.0 - sqrt_clamped(rad) * 2.0) / (q * n * 2.0);
    Ok(to_f64(val))
}

/// Riemannian constant `(q-1)/m` for `Ric ≥ (m-1)g` together with its value
/// `(q-1)(m-1)/m` after rescaling the metric to `Ric ≥ g`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RiemannianConstants {
    pub raw: f64,
    pub bridged: f64,
}

pub fn riemannian_constants(dims: Dimensions) -> Result<RiemannianConstants> {
    dims.require_admissible()?;
    let m = dd(dims.m() as f64);
    let q = dims.qf();
    let raw = (q - 1.0) / m;
    let bridged = raw * (m - 1.0);
    Ok(RiemannianConstants { raw: to_f64(raw), bridged: to_f64(bridged) })
}

/// Endpoints `s ∓ s√(1-(n-1)q/(n+1)) - 1` with `s = 2(n+1)/(q(n-1))`.
///
/// At `n = 1` the interval is `(0, ∞)` in the limit and the call is
/// rejected.
pub fn k_interval(dims: Dimensions) -> Result<KInterval> {
    dims.require_interval_range()?;
    let (n, q) = (dims.nf(), dims.qf());
    let s = (n + 1.0) * 2.0 / (q * (n - 1.0));
    let r = sqrt_clamped((n + 1.0 - (n - 1.0) * q) / (n + 1.0));
    let k_lo = s - s * r - 1.0;
    let k_hi = s + s * r - 1.0;
    Ok(KInterval { k_lo: to_f64(k_lo), k_hi: to_f64(k_hi) })
}

fn require_positive_k(k: f64) -> Result<()> {
    if !(k.is_finite() && k > 0.0) {
        return Err(Error::domain(format!("k = {k} must be positive")));
    }
    Ok(())
}

fn lambda1_coefficient_dd(dims: Dimensions, k: f64) -> Dd {
    let (n, q, k) = (dims.nf(), dims.qf(), dd(k));
    let den = (n * n * 4.0 + n * 4.0 + q) * k;
    1.0 - (n + (n - 1.0) * k) * (k * n + n - 1.0) * q / den
}

/// Coefficient of `λ₁` in `1/C_{S,λ₁,k}` up to the factor `2/(q-1)`:
/// `1 - (n+(n-1)k)(kn+n-1)q/((4n²+4n+q)k)`.
pub fn lambda1_coefficient(dims: Dimensions, k: f64) -> Result<f64> {
    require_positive_k(k)?;
    Ok(to_f64(lambda1_coefficient_dd(dims, k)))
}

fn require_k_in_interval(dims: Dimensions, k: f64) -> Result<KInterval> {
    require_positive_k(k)?;
    let iv = k_interval(dims)?;
    if !iv.contains(k) {
        return Err(Error::domain(format!(
            "k = {k} lies outside the admissible interval [{}, {}]",
            iv.k_lo, iv.k_hi
        )));
    }
    Ok(iv)
}

fn require_lambda1(lambda1: f64) -> Result<()> {
    if !(lambda1.is_finite() && lambda1 >= 1.0) {
        return Err(Error::domain(format!("lambda1 = {lambda1} must satisfy lambda1 >= 1")));
    }
    Ok(())
}

fn f_of_k_dd(dims: Dimensions, k: f64, lambda1: f64) -> Dd {
    let (n, q, kf) = (dims.nf(), dims.qf(), dd(k));
    let den = (n * n * 4.0 + n * 4.0 + q) * kf;
    let free = q * n * (kf * n + n - 1.0) / den;
    (lambda1_coefficient_dd(dims, k) * lambda1 + free) / (q - 1.0)
}

/// `F(k) = (1/(q-1))·[coef(k)·λ₁ + qn(kn+n-1)/((4n²+4n+q)k)]`, the bound
/// on `λ` obtained after maximizing over `x` at fixed `k`.
pub fn f_of_k(dims: Dimensions, k: f64, lambda1: f64) -> Result<f64> {
    require_lambda1(lambda1)?;
    require_k_in_interval(dims, k)?;
    Ok(to_f64(f_of_k_dd(dims, k, lambda1)))
}

/// `C_{S,λ₁,k} = 1/(2F(k))`.
pub fn cs_general(dims: Dimensions, k: f64, lambda1: f64) -> Result<f64> {
    require_lambda1(lambda1)?;
    require_k_in_interval(dims, k)?;
    Ok(to_f64(1.0 / (f_of_k_dd(dims, k, lambda1) * 2.0)))
}

/// Maximizer of [`f_of_k`] over the closed `k` interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KOptimum {
    pub k_star: f64,
    /// `F(k_star)`: positive solutions are constant for `λ` below this value.
    pub lambda_threshold: f64,
    pub k_lo: f64,
    pub k_hi: f64,
}

/// Golden-section maximization of a unimodal function on `[a, b]`.
pub fn golden_section_max(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> f64 {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while (b - a).abs() > tol {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    let mid = 0.5 * (a + b);
    // Endpoints of the final bracket win when the function is monotone.
    [a, mid, b]
        .into_iter()
        .fold((mid, f(mid)), |best, x| {
            let fx = f(x);
            if fx > best.1 {
                (x, fx)
            } else {
                best
            }
        })
        .0
}

/// Grid scan of `F` on [`OPTIMIZE_GRID_POINTS`] points of the closed
/// interval followed by golden-section polishing between the neighbours of
/// the best grid point. `F` need not be concave for large `λ₁`, so the scan
/// always runs first.
pub fn optimize_k(dims: Dimensions, lambda1: f64) -> Result<KOptimum> {
    require_lambda1(lambda1)?;
    let iv = k_interval(dims)?;
    let f = |k: f64| to_f64(f_of_k_dd(dims, k, lambda1));
    if iv.is_degenerate() {
        let k = iv.k_lo;
        return Ok(KOptimum { k_star: k, lambda_threshold: f(k), k_lo: iv.k_lo, k_hi: iv.k_hi });
    }
    let last = OPTIMIZE_GRID_POINTS - 1;
    let grid_k = |i: usize| {
        if i == last {
            iv.k_hi
        } else {
            iv.k_lo + (iv.k_hi - iv.k_lo) * i as f64 / last as f64
        }
    };
    let values: Vec<f64> = (0..OPTIMIZE_GRID_POINTS).map(|i| f(grid_k(i))).collect();
    let best = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let idx = values
        .iter()
        .position(|&v| v >= best - OPTIMIZE_TIE_TOL)
        .expect("grid is nonempty");

    let lo = grid_k(idx.saturating_sub(1));
    let hi = grid_k((idx + 1).min(last));
    let polished = golden_section_max(f, lo, hi, 1e-12 * iv.k_hi.max(1.0));
    let (k_star, lambda_threshold) = if f(polished) > values[idx] + OPTIMIZE_TIE_TOL {
        (polished, f(polished))
    } else {
        (grid_k(idx), values[idx])
    };
    Ok(KOptimum { k_star, lambda_threshold, k_lo: iv.k_lo, k_hi: iv.k_hi })
}

/// Upper bound on `ε` for which the discriminant of the quadratic in `k`
/// stays nonnegative.
pub fn epsilon_max(dims: Dimensions) -> Result<f64> {
    dims.require_interval_range()?;
    let (n, q) = (dims.nf(), dims.qf());
    let rad = q * q + q * n * (n + 1.0) * 4.0;
    let num = n * (n + 1.0) * 4.0 - q * (n - 1.0) * 2.0 - (n - 1.0) * sqrt_clamped(rad) * 2.0;
    let val = num / (n * (n - 1.0) * q);
    Ok(to_f64(val).max(0.0))
}

/// `(α, β, γ)` with `Δ(ε)/(2n(n-1)q)² = α²ε² - βε + γ`, where `Δ(ε)` is the
/// discriminant in `k` of the quadratic inequality at fixed `ε`.
pub fn psi_coefficients(dims: Dimensions) -> Result<(f64, f64, f64)> {
    dims.require_interval_range()?;
    let (n, q) = (dims.nf(), dims.qf());
    let a = q * (n * n * 2.0 - n * 2.0) - n * n * 4.0 - n * 4.0;
    let b = q * n * (n - 1.0);
    let c = q * q * n * n * (n - 1.0) * (n - 1.0) * 4.0;
    let e = q * q * n * (n - 1.0) * (n - 1.0) * (n - 1.0) * 4.0;
    let d = (n * (n - 1.0) * q * 2.0) * (n * (n - 1.0) * q * 2.0);
    let alpha = sqrt_clamped(b * b / d);
    Ok((to_f64(alpha), to_f64(-(a * b * 2.0 - e) / d), to_f64((a * a - c) / d)))
}

/// Lower bound for `k` at `ε = 0`:
/// `(2n²+2n-q(n²-n)-2√((n²+n)²-(n²-n)q(n²+n)))/(n(n-1)q)`.
pub fn k_lower_bound_eps0(dims: Dimensions) -> Result<f64> {
    dims.require_interval_range()?;
    let (n, q) = (dims.nf(), dims.qf());
    let p = n * n + n;
    let mneg = n * n - n;
    let rad = p * p - mneg * q * p;
    let num = p * 2.0 - q * mneg - sqrt_clamped(rad) * 2.0;
    Ok(to_f64(num / (n * (n - 1.0) * q)))
}

/// Threshold on `λ` from the coefficient `C < 0` at `k = k_lo`, `ε = 0`:
/// `1/((q-1)(1+((n-1)/n)k_lo))`.
pub fn section2_threshold(dims: Dimensions) -> Result<f64> {
    let k = dd(k_lower_bound_eps0(dims)?);
    let (n, q) = (dims.nf(), dims.qf());
    Ok(to_f64(1.0 / ((q - 1.0) * (1.0 + (n - 1.0) / n * k))))
}

/// Feasible range of `x = a/β` at fixed `k`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct XBounds {
    pub x_lo: f64,
    pub x_hi: f64,
}

impl XBounds {
    pub fn is_feasible(&self) -> bool {
        self.x_lo <= self.x_hi * (1.0 + BOUNDARY_TOL)
    }

    pub fn contains(&self, x: f64) -> bool {
        x >= self.x_lo * (1.0 - BOUNDARY_TOL) && x <= self.x_hi * (1.0 + BOUNDARY_TOL)
    }
}

/// `x_lo = (kn+n-k)q/(2(n+1))` (from `B ≤ 0`) and
/// `x_hi = (4n²+4n+q)k/(2(n+1)(kn+n-1))` (from the discriminant in `y`).
pub fn x_bounds(dims: Dimensions, k: f64) -> Result<XBounds> {
    if dims.n() < 2 {
        return Err(Error::domain("x bounds require n >= 2"));
    }
    require_positive_k(k)?;
    let (n, q, kf) = (dims.nf(), dims.qf(), dd(k));
    let guard = kf * n + n - 1.0;
    if guard.hi() <= 0.0 {
        return Err(Error::domain(format!("kn + n - 1 = {} must be positive", to_f64(guard))));
    }
    let x_lo = (kf * n + n - kf) * q / ((n + 1.0) * 2.0);
    let x_hi = (n * n * 4.0 + n * 4.0 + q) * kf / ((n + 1.0) * 2.0 * guard);
    Ok(XBounds { x_lo: to_f64(x_lo), x_hi: to_f64(x_hi) })
}

/// Right-hand side of the lower bound on `λ` for a nonconstant solution:
/// `λ₁/(q-1) + (1-λ₁(1+(n-1)k/n))·qn/(2(q-1)(n+1)x)`.
pub fn lambda_bound_star3(dims: Dimensions, k: f64, x: f64, lambda1: f64) -> Result<f64> {
    let xb = x_bounds(dims, k)?;
    if !xb.contains(x) {
        return Err(Error::domain(format!(
            "x = {x} lies outside [{}, {}] for k = {k}",
            xb.x_lo, xb.x_hi
        )));
    }
    let (n, q, kf, xf) = (dims.nf(), dims.qf(), dd(k), dd(x));
    let head = dd(lambda1) / (q - 1.0);
    let tail = (1.0 - (1.0 + (n - 1.0) * kf / n) * lambda1) * q * n
        / ((q - 1.0) * (n + 1.0) * xf * 2.0);
    Ok(to_f64(head + tail))
}

/// Every constant reported for one `(n, q)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConstantsReport {
    pub n: u32,
    pub q: f64,
    pub c_s: f64,
    pub c_riem_raw: f64,
    pub c_riem_bridged: f64,
    pub c_conj: f64,
    pub lambda1_lower: f64,
    /// `q` equals the critical exponent; closed forms are degenerate there.
    pub boundary: bool,
}

impl ConstantsReport {
    pub fn compute(dims: Dimensions) -> Result<Self> {
        let c_s = cs_bm(dims)?;
        let riem = riemannian_constants(dims)?;
        let q = dims.q();
        Ok(Self {
            n: dims.n(),
            q,
            c_s,
            c_riem_raw: riem.raw,
            c_riem_bridged: riem.bridged,
            c_conj: (q - 1.0) / 2.0,
            lambda1_lower: (q - 1.0) / (2.0 * c_s),
            boundary: dims.is_boundary(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn dims(n: u32, q: f64) -> Dimensions {
        Dimensions::new(n, q).unwrap()
    }

    #[test]
    fn psi_coefficients_at_2_2() {
        let (a, b, g) = psi_coefficients(dims(2, 2.0)).unwrap();
        assert_abs_diff_eq!(a, 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(b, 2.5, epsilon = 1e-15);
        assert_abs_diff_eq!(g, 3.0, epsilon = 1e-15);
        // γ = Δ₀/(2n(n-1)q)², and Δ₀ = 192 here
        assert_abs_diff_eq!(g * 64.0, 192.0, epsilon = 1e-12);
    }

    #[test]
    fn cs_bm_examples() {
        assert_abs_diff_eq!(cs_bm(dims(2, 2.0)).unwrap(), 1.0 - 3f64.sqrt() / 4.0, epsilon = 1e-15);
        assert_abs_diff_eq!(cs_bm(dims(1, 1.5)).unwrap(), 0.25, epsilon = 1e-15);
        assert!(cs_bm(dims(3, 1.0 + 1e-12)).unwrap() < 1e-11);
    }

    #[test]
    fn cs_bm_rejects_supercritical_q() {
        let err = cs_bm(dims(3, 2.5)).unwrap_err();
        assert!(matches!(err, Error::Domain(ref m) if m.contains("critical exponent")));
        assert!(Dimensions::new(2, 1.0).is_err());
        assert!(Dimensions::new(0, 2.0).is_err());
    }

    #[test]
    fn riemannian_examples() {
        let r = riemannian_constants(dims(2, 2.0)).unwrap();
        assert_abs_diff_eq!(r.raw, 0.25);
        assert_abs_diff_eq!(r.bridged, 0.75);
        let r = riemannian_constants(dims(1, 3.0)).unwrap();
        assert_abs_diff_eq!(r.raw, 1.0);
        assert_abs_diff_eq!(r.bridged, 1.0);
        assert!(riemannian_constants(dims(2, 3.5)).is_err());
    }

    #[test]
    fn k_interval_examples() {
        let iv = k_interval(dims(2, 2.0)).unwrap();
        assert_abs_diff_eq!(iv.k_lo, 2.0 - 3f64.sqrt(), epsilon = 1e-15);
        assert_abs_diff_eq!(iv.k_hi, 2.0 + 3f64.sqrt(), epsilon = 1e-15);
        let iv = k_interval(dims(2, 3.0)).unwrap();
        assert_eq!((iv.k_lo, iv.k_hi), (1.0, 1.0));
        assert!(iv.is_degenerate());
        let iv = k_interval(dims(3, 1.5)).unwrap();
        assert_abs_diff_eq!(iv.product(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn k_interval_rejects_n1() {
        let err = k_interval(dims(1, 2.0)).unwrap_err();
        assert_eq!(err, Error::domain("interval unbounded at n = 1; use limit semantics"));
    }

    #[test]
    fn lambda1_coefficient_examples() {
        let klo = k_interval(dims(2, 2.0)).unwrap().k_lo;
        assert_abs_diff_eq!(lambda1_coefficient(dims(2, 2.0), klo).unwrap(), 0.0, epsilon = 1e-10);
        assert_abs_diff_eq!(lambda1_coefficient(dims(2, 2.0), 1.0).unwrap(), 4.0 / 13.0, epsilon = 1e-15);
        assert!(lambda1_coefficient(dims(2, 2.0), 10.0).unwrap() < 0.0);
        assert!(lambda1_coefficient(dims(2, 2.0), 0.0).is_err());
    }

    #[test]
    fn cs_general_and_f_of_k_examples() {
        let d = dims(2, 2.0);
        let klo = k_interval(d).unwrap().k_lo;
        for l1 in [1.0, 2.0, 5.0] {
            assert_abs_diff_eq!(cs_general(d, klo, l1).unwrap(), cs_bm(d).unwrap(), epsilon = 1e-12);
        }
        assert_abs_diff_eq!(cs_general(d, 1.0, 1.0).unwrap(), 0.65, epsilon = 1e-15);
        assert_abs_diff_eq!(f_of_k(d, 1.0, 1.0).unwrap(), 10.0 / 13.0, epsilon = 1e-15);
        assert_abs_diff_eq!(f_of_k(d, klo, 1.0).unwrap(), 0.5 / cs_bm(d).unwrap(), epsilon = 1e-12);
        assert!(cs_general(dims(1, 2.0), 1.0, 1.0).is_err());
        assert!(cs_general(d, 10.0, 1.0).is_err());
        assert!(cs_general(d, 1.0, 0.5).is_err());
    }

    #[test]
    fn optimize_k_degenerate_interval() {
        let opt = optimize_k(dims(2, 3.0), 1.0).unwrap();
        assert_eq!(opt.k_star, 1.0);
    }

    #[test]
    fn epsilon_max_examples() {
        assert_abs_diff_eq!(epsilon_max(dims(2, 2.0)).unwrap(), (20.0 - 2.0 * 52f64.sqrt()) / 4.0, epsilon = 1e-14);
        assert_abs_diff_eq!(epsilon_max(dims(2, 3.0)).unwrap(), 0.0, epsilon = 1e-14);
        let e = epsilon_max(dims(2, 1.0001)).unwrap();
        assert!(e < 6.0 && e > 6.0 - 1e-3, "{e}");
        assert!(epsilon_max(dims(1, 2.0)).is_err());
    }

    #[test]
    fn k_lower_bound_examples() {
        assert_abs_diff_eq!(k_lower_bound_eps0(dims(2, 2.0)).unwrap(), 2.0 - 3f64.sqrt(), epsilon = 1e-15);
        assert_abs_diff_eq!(k_lower_bound_eps0(dims(2, 3.0)).unwrap(), 1.0, epsilon = 1e-15);
        let d = dims(3, 1.5);
        assert_abs_diff_eq!(k_lower_bound_eps0(d).unwrap(), k_interval(d).unwrap().k_lo, epsilon = 1e-12);
    }

    #[test]
    fn section2_threshold_examples() {
        let t = section2_threshold(dims(2, 2.0)).unwrap();
        assert_abs_diff_eq!(t, 1.0 / (1.0 + (2.0 - 3f64.sqrt()) / 2.0), epsilon = 1e-14);
        let t = section2_threshold(dims(2, 3.0)).unwrap();
        assert_abs_diff_eq!(t, 1.0 / 3.0, epsilon = 1e-14);
        assert_abs_diff_eq!(t, 0.5 / cs_bm(dims(2, 3.0)).unwrap(), epsilon = 1e-14);
    }

    #[test]
    fn x_bounds_examples() {
        let d = dims(2, 2.0);
        let xb = x_bounds(d, 1.0).unwrap();
        assert_abs_diff_eq!(xb.x_lo, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(xb.x_hi, 13.0 / 9.0, epsilon = 1e-15);
        let klo = 2.0 - 3f64.sqrt();
        let xb = x_bounds(d, klo).unwrap();
        assert_abs_diff_eq!(xb.x_lo, xb.x_hi, epsilon = 1e-12);
        assert_abs_diff_eq!(xb.x_lo, 0.755983, epsilon = 1e-6);
        assert!(!x_bounds(d, 5.0).unwrap().is_feasible());
    }

    #[test]
    fn lambda_bound_star3_examples() {
        let d = dims(2, 2.0);
        assert_abs_diff_eq!(lambda_bound_star3(d, 1.0, 13.0 / 9.0, 1.0).unwrap(), 10.0 / 13.0, epsilon = 1e-12);
        assert_abs_diff_eq!(lambda_bound_star3(d, 1.0, 1.0, 1.0).unwrap(), 2.0 / 3.0, epsilon = 1e-14);
        assert!(lambda_bound_star3(d, 1.0, 2.0, 1.0).is_err());
    }

    #[test]
    fn star3_monotone_in_x_when_lambda1_large() {
        let d = dims(3, 1.4);
        for &k in &[0.5, 1.0, 1.5] {
            let xb = x_bounds(d, k).unwrap();
            if !xb.is_feasible() {
                continue;
            }
            let l1 = 3.0 / (3.0 + 2.0 * k);
            let mut prev = f64::NEG_INFINITY;
            for i in 0..=50 {
                let x = xb.x_lo + (xb.x_hi - xb.x_lo) * i as f64 / 50.0;
                let v = lambda_bound_star3(d, k, x, l1.max(1.0)).unwrap();
                assert!(v >= prev - 1e-14);
                prev = v;
            }
        }
    }

    #[test]
    fn report_ordering_at_n1_collapses() {
        let r = ConstantsReport::compute(dims(1, 2.5)).unwrap();
        assert_abs_diff_eq!(r.c_s, r.c_conj, epsilon = 1e-15);
        assert_abs_diff_eq!(r.c_s, r.c_riem_bridged, epsilon = 1e-15);
        assert!(!r.boundary);
        assert!(ConstantsReport::compute(dims(2, 3.0)).unwrap().boundary);
    }

    #[test]
    fn golden_section_finds_interior_max() {
        let x = golden_section_max(|x| -(x - 0.3) * (x - 0.3), 0.0, 1.0, 1e-12);
        assert_abs_diff_eq!(x, 0.3, epsilon = 1e-6);
        let x = golden_section_max(|x| -x, 0.0, 1.0, 1e-12);
        assert_eq!(x, 0.0);
    }
}
