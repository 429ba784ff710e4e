//! Monotonicity of `ψ(ε) = αε - √(α²ε² - βε + γ)` below the smaller root of
//! the radicand. This is a floating-point sampling check, not an identity.

use super::{PassReport, Status, StepReport};
use crate::{Error, Result};

const SAMPLES: usize = 1000;

fn step(name: &str, failure: Option<String>, checks: usize) -> StepReport {
    StepReport {
        name: name.to_string(),
        status: if failure.is_none() { Status::Pass } else { Status::Fail },
        residual: failure,
        checks,
        instantiations: Vec::new(),
        cleared_factor: None,
        side_conditions: Vec::new(),
        sign_checks: 0,
    }
}

/// Samples `ψ` on `(0, (β - √(β² - 4α²γ))/(2α²))`.
pub fn verify_psi_monotone(alpha: f64, beta_c: f64, gamma_c: f64) -> Result<PassReport> {
    if !(alpha > 0.0 && beta_c > 0.0 && gamma_c > 0.0) {
        return Err(Error::domain(format!("psi parameters must be positive, got ({alpha}, {beta_c}, {gamma_c})")));
    }
    let disc = beta_c * beta_c - 4.0 * alpha * alpha * gamma_c;
    if disc <= 0.0 {
        return Err(Error::domain(format!("need beta^2 > 4 alpha^2 gamma, got {beta_c}^2 <= 4*{alpha}^2*{gamma_c}")));
    }
    let end = (beta_c - disc.sqrt()) / (2.0 * alpha * alpha);
    let radicand = |e: f64| alpha * alpha * e * e - beta_c * e + gamma_c;
    let psi = |e: f64| alpha * e - radicand(e).sqrt();
    let dpsi = |e: f64| alpha - (2.0 * alpha * alpha * e - beta_c) / (2.0 * radicand(e).sqrt());

    let eps: Vec<f64> = (1..=SAMPLES).map(|i| end * i as f64 / (SAMPLES + 1) as f64).collect();
    let values: Vec<f64> = eps.iter().map(|&e| psi(e)).collect();
    let rising = values
        .windows(2)
        .zip(&eps)
        .find(|(w, _)| !(w[1] > w[0]))
        .map(|(w, e)| format!("psi not increasing after eps = {e}: {} then {}", w[0], w[1]));
    let slope = eps.iter().find(|&&e| !(dpsi(e) > 0.0)).map(|e| format!("psi'({e}) = {} is not positive", dpsi(*e)));
    Ok(PassReport {
        name: "psi_monotone".to_string(),
        steps: vec![step("strict increase between samples", rising, SAMPLES - 1), step("closed-form derivative positive", slope, SAMPLES)],
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        assert!(verify_psi_monotone(1.0, 3.0, 1.0).unwrap().passed());
        assert!(verify_psi_monotone(1.0, 2.1, 1.1).unwrap().passed());
        assert!(matches!(verify_psi_monotone(1.0, 2.0, 2.0), Err(Error::Domain(_))));
        assert!(verify_psi_monotone(-1.0, 3.0, 1.0).is_err());
    }
}
