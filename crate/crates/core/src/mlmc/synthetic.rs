use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::rng::{Purpose, RandomStream};

use super::estimator::LevelSampler;
use super::schedule::LevelSchedule;

/// Gaussian stand-in for the PDE: `Ψ_k = d_k + Σ_m G_{k,m} Z_m` with one
/// standard normal vector `Z` per realization. Every moment of both
/// estimators is available in closed form.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianModel {
    means: Vec<f64>,
    loadings: Vec<Vec<f64>>,
}

impl GaussianModel {
    pub fn new(means: Vec<f64>, loadings: Vec<Vec<f64>>) -> Result<Self> {
        let width = loadings.first().map_or(0, Vec::len);
        if means.len() != loadings.len() || loadings.iter().any(|r| r.len() != width) {
            return Err(Error::InvalidArgument(
                "one loading row of common width is needed per level".into(),
            ));
        }
        Ok(GaussianModel { means, loadings })
    }

    pub fn levels(&self) -> usize {
        self.means.len()
    }

    fn correction_loading(&self, l: usize) -> Vec<f64> {
        if l == 0 {
            self.loadings[0].clone()
        } else {
            self.loadings[l]
                .iter()
                .zip(&self.loadings[l - 1])
                .map(|(a, b)| a - b)
                .collect()
        }
    }

    /// `𝔼 Ψ_L`.
    pub fn mean(&self, level: usize) -> f64 {
        self.means[level]
    }

    /// `Cov(Ψ_j - Ψ_{j-1}, Ψ_k - Ψ_{k-1})` on a shared realization.
    pub fn correction_covariance(&self, j: usize, k: usize) -> f64 {
        let (a, b) = (self.correction_loading(j), self.correction_loading(k));
        a.iter().zip(&b).map(|(x, y)| x * y).sum()
    }

    /// Variance of the standard estimator under `schedule`.
    pub fn standard_variance(&self, schedule: &LevelSchedule) -> f64 {
        schedule
            .levels
            .iter()
            .map(|l| self.correction_covariance(l.level, l.level) / l.samples as f64)
            .sum()
    }

    /// Variance of the coupled estimator: the standard variance plus
    /// `2 Σ_{j<k} C_{j,k} / M_j`.
    pub fn coupled_variance(&self, schedule: &LevelSchedule) -> f64 {
        let m = schedule.samples();
        let mut extra = 0.0;
        for j in 0..m.len() {
            for k in j + 1..m.len() {
                extra += self.correction_covariance(j, k) / m[j] as f64;
            }
        }
        self.standard_variance(schedule) + 2.0 * extra
    }
}

impl LevelSampler for GaussianModel {
    fn sample_levels(
        &self,
        _: &LevelSchedule,
        lowest: usize,
        highest: usize,
        stream: &RandomStream,
    ) -> Result<Vec<f64>> {
        if highest >= self.levels() || lowest > highest {
            return Err(Error::InvalidArgument(format!(
                "levels {lowest}..={highest} outside the model's {} levels",
                self.levels()
            )));
        }
        let mut rng = stream.purpose(Purpose::Synthetic).rng();
        let z: Vec<f64> = (0..self.loadings[0].len())
            .map(|_| StandardNormal.sample(&mut rng))
            .collect();
        Ok((lowest..=highest)
            .map(|k| {
                self.means[k]
                    + self.loadings[k].iter().zip(&z).map(|(g, z)| g * z).sum::<f64>()
            })
            .collect())
    }
}
