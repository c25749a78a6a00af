use crate::config::Discretization;
use crate::error::{Error, Result};
use crate::fem::LevelParams;

/// Exponent in the level weights `(ℓ+1)^{-WEIGHT_EXPONENT}`.
pub const WEIGHT_EXPONENT: f64 = 1.001;

/// Weight budget that matches the reference experiment for `method`.
pub fn default_c_rho(method: Discretization) -> f64 {
    match method {
        Discretization::Adapted => 2.0,
        Discretization::Nonadapted => 1.0,
    }
}

/// Parameters and sample count of one level.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LevelSpec {
    pub level: usize,
    pub params: LevelParams,
    /// Normalized weight, absent on level 0.
    pub rho: Option<f64>,
    pub samples: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LevelSchedule {
    pub method: Discretization,
    pub kappa: f64,
    pub c_rho: f64,
    pub levels: Vec<LevelSpec>,
}

impl LevelSchedule {
    pub fn max_level(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn samples(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.samples).collect()
    }

    pub fn params(&self) -> Vec<LevelParams> {
        self.levels.iter().map(|l| l.params).collect()
    }

    pub fn h_bar(&self, level: usize) -> f64 {
        self.levels[level].params.h_bar
    }

    /// Rate exponent `r` in `M_ℓ ∝ (h̄_ℓ / h̄_L)^{2r}`: `2κ` for adapted
    /// meshes, `κ` for structured ones.
    pub fn rate(&self) -> f64 {
        rate(self.method, self.kappa)
    }
}

fn rate(method: Discretization, kappa: f64) -> f64 {
    match method {
        Discretization::Adapted => 2.0 * kappa,
        Discretization::Nonadapted => kappa,
    }
}

/// `log2 h̄_ℓ`; kept exact so that powers of two stay exact.
fn log2_h_bar(method: Discretization, level: usize) -> f64 {
    match method {
        Discretization::Adapted => -2.0 - level as f64 / 2.0,
        Discretization::Nonadapted => -2.0 - level as f64,
    }
}

/// Normalized weights `ρ̂_ℓ`, ℓ = 1..=L.
pub fn level_weights(max_level: usize) -> Vec<f64> {
    let raw: Vec<f64> = (1..=max_level)
        .map(|l| (l as f64 + 1.0).powf(-WEIGHT_EXPONENT))
        .collect();
    let total: f64 = raw.iter().sum();
    raw.iter().map(|w| w / total).collect()
}

/// Level parameters and sample counts for an estimator with `max_level + 1`
/// levels.
///
/// Adapted: `h̄_ℓ = 2^{-2-ℓ/2}`, `ε_ℓ = Δt_ℓ = h̄_ℓ²`. Structured:
/// `h̄_ℓ = 2^{-2-ℓ}`, `ε_ℓ = Δt_ℓ = h̄_ℓ`. With `r` from
/// [`LevelSchedule::rate`], `M_0 = ⌈h̄_L^{-2r}⌉` and
/// `M_ℓ = ⌈(h̄_ℓ/h̄_L)^{2r} (c_ρ ρ̂_ℓ)^{-2}⌉`.
pub fn build_schedule(
    max_level: usize,
    method: Discretization,
    kappa: f64,
    c_rho: f64,
) -> Result<LevelSchedule> {
    if !(kappa > 0.5 && kappa <= 1.0) {
        return Err(Error::InvalidArgument(format!("kappa must lie in (0.5, 1], got {kappa}")));
    }
    if !(c_rho.is_finite() && c_rho > 0.0) {
        return Err(Error::InvalidArgument(format!("c_rho must be positive, got {c_rho}")));
    }
    let p = 2.0 * rate(method, kappa);
    let top = log2_h_bar(method, max_level);
    let weights = level_weights(max_level);
    let levels = (0..=max_level)
        .map(|l| {
            let lh = log2_h_bar(method, l);
            let h_bar = lh.exp2();
            let fine = match method {
                Discretization::Adapted => (2.0 * lh).exp2(),
                Discretization::Nonadapted => h_bar,
            };
            let (rho, count) = if l == 0 {
                (None, (-p * top).exp2())
            } else {
                let rho = weights[l - 1];
                (Some(rho), (p * (lh - top)).exp2() / (c_rho * rho).powi(2))
            };
            LevelSpec {
                level: l,
                params: LevelParams {
                    h_bar,
                    eps: fine,
                    dt: fine,
                },
                rho,
                samples: (count.ceil() as usize).max(1),
            }
        })
        .collect();
    Ok(LevelSchedule {
        method,
        kappa,
        c_rho,
        levels,
    })
}
