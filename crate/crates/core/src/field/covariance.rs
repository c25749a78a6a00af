use serde::{Deserialize, Serialize};
use statrs::function::gamma::gamma;

use crate::error::{Error, Result};

/// Matérn covariance parameters: smoothness `nu`, variance `sigma2`,
/// correlation length `chi`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CovarianceSpec {
    pub nu: f64,
    pub sigma2: f64,
    pub chi: f64,
}

impl Default for CovarianceSpec {
    fn default() -> Self {
        CovarianceSpec {
            nu: 1.5,
            sigma2: 0.25,
            chi: 0.1,
        }
    }
}

impl CovarianceSpec {
    pub fn new(nu: f64, sigma2: f64, chi: f64) -> Result<Self> {
        let spec = CovarianceSpec { nu, sigma2, chi };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("nu", self.nu), ("sigma2", self.sigma2), ("chi", self.chi)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidArgument(format!(
                    "covariance parameter {name} must be positive and finite, got {v}"
                )));
            }
        }
        Ok(())
    }
}

/// `x^nu K_nu(x)` for `x > 0`, from the integral representation
/// `K_nu(x) = ∫_0^∞ exp(-x cosh t) cosh(nu t) dt`.
///
/// The integrand is analytic in a strip of half-width π/2 and decays doubly
/// exponentially, so the trapezoidal rule converges geometrically in the step.
pub(crate) fn scaled_bessel_k(nu: f64, x: f64) -> f64 {
    debug_assert!(x > 0.0);
    const STEP: f64 = 0.05;
    let log_x = x.ln();
    let term = |t: f64| {
        let base = nu * log_x - x * t.cosh();
        0.5 * ((base + nu * t).exp() + (base - nu * t).exp())
    };
    let mut sum = 0.5 * term(0.0);
    let mut k = 1usize;
    loop {
        let t = k as f64 * STEP;
        let f = term(t);
        sum += f;
        // past the peak of the integrand once x sinh t > nu
        if x * t.sinh() > nu && f <= 1e-18 * sum {
            break;
        }
        k += 1;
        if k > 100_000 {
            break;
        }
    }
    sum * STEP
}

/// Matérn covariance at distance `r`.
pub fn matern_cov(r: f64, spec: &CovarianceSpec) -> Result<f64> {
    if !r.is_finite() || r < 0.0 {
        return Err(Error::InvalidArgument(format!(
            "distance must be finite and non-negative, got {r}"
        )));
    }
    Ok(matern_unchecked(r, spec))
}

pub(crate) fn matern_unchecked(r: f64, spec: &CovarianceSpec) -> f64 {
    let x = (2.0 * spec.nu).sqrt() * r / spec.chi;
    if x < 1e-12 {
        return spec.sigma2;
    }
    if x > 1400.0 {
        return 0.0;
    }
    spec.sigma2 * 2f64.powf(1.0 - spec.nu) / gamma(spec.nu) * scaled_bessel_k(spec.nu, x)
}
