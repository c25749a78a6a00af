use std::time::{Duration, Instant};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fem::PathSolver;
use crate::rng::RandomStream;

use super::schedule::LevelSchedule;

/// Produces level values `Ψ_k(ω)` for one realization `ω`.
pub trait LevelSampler: Sync {
    /// `Ψ_k(ω)` for `k = lowest..=highest`, with `ω` drawn from `stream`.
    fn sample_levels(
        &self,
        schedule: &LevelSchedule,
        lowest: usize,
        highest: usize,
        stream: &RandomStream,
    ) -> Result<Vec<f64>>;
}

impl LevelSampler for PathSolver {
    fn sample_levels(
        &self,
        schedule: &LevelSchedule,
        lowest: usize,
        highest: usize,
        stream: &RandomStream,
    ) -> Result<Vec<f64>> {
        let params: Vec<_> = schedule.levels[lowest..=highest].iter().map(|l| l.params).collect();
        self.solve_levels(&params, schedule.method, stream)
    }
}

/// Statistics of the corrections `Ψ_ℓ - Ψ_{ℓ-1}` on one level.
#[derive(Debug, Clone, PartialEq)]
pub struct LevelStats {
    pub level: usize,
    pub samples: usize,
    pub mean: f64,
    /// Unbiased sample variance, zero with a single sample.
    pub variance: f64,
    /// Summed compute time of the realizations whose finest level is this one.
    pub wall_time: Duration,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EstimatorResult {
    pub value: f64,
    pub levels: Vec<LevelStats>,
    /// Sample covariances of the corrections on shared realizations,
    /// coupled estimator only.
    pub covariances: Option<Vec<Vec<f64>>>,
    pub wall_time: Duration,
}

fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

fn covariance(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len().min(y.len());
    if n < 2 {
        return 0.0;
    }
    let (mx, my) = (mean(&x[..n]), mean(&y[..n]));
    x[..n]
        .iter()
        .zip(&y[..n])
        .map(|(a, b)| (a - mx) * (b - my))
        .sum::<f64>()
        / (n - 1) as f64
}

fn level_stats(level: usize, corrections: &[f64], wall_time: Duration) -> LevelStats {
    LevelStats {
        level,
        samples: corrections.len(),
        mean: mean(corrections),
        variance: covariance(corrections, corrections),
        wall_time,
    }
}

/// Stream of realization `index` on `level` under `root`.
pub fn realization_stream(root: &RandomStream, level: usize, index: usize) -> RandomStream {
    root.child(level as u64).child(index as u64)
}

/// Standard estimator: independent realizations per level, each evaluated
/// on its level and the one below.
pub fn mlmc_estimate(
    schedule: &LevelSchedule,
    sampler: &dyn LevelSampler,
    root: &RandomStream,
) -> Result<EstimatorResult> {
    let start = Instant::now();
    let tasks: Vec<(usize, usize)> = schedule
        .levels
        .iter()
        .flat_map(|l| (0..l.samples).map(move |i| (l.level, i)))
        .collect();
    let outcomes: Vec<Result<(f64, Duration)>> = tasks
        .par_iter()
        .map(|&(level, i)| {
            let t = Instant::now();
            let stream = realization_stream(root, level, i);
            let v = sampler
                .sample_levels(schedule, level.saturating_sub(1), level, &stream)
                .map_err(|e| Error::Sample { level, index: i, source: Box::new(e) })?;
            let correction = if level == 0 { v[0] } else { v[1] - v[0] };
            Ok((correction, t.elapsed()))
        })
        .collect();

    let mut per_level: Vec<(Vec<f64>, Duration)> =
        vec![(Vec::new(), Duration::ZERO); schedule.levels.len()];
    for (&(level, _), outcome) in tasks.iter().zip(outcomes) {
        let (c, dt) = outcome?;
        per_level[level].0.push(c);
        per_level[level].1 += dt;
    }
    let levels: Vec<LevelStats> = per_level
        .iter()
        .enumerate()
        .map(|(l, (c, dt))| level_stats(l, c, *dt))
        .collect();
    Ok(EstimatorResult {
        value: levels.iter().map(|l| l.mean).sum(),
        levels,
        covariances: None,
        wall_time: start.elapsed(),
    })
}

/// Coupled estimator: realization `i` is evaluated on every level `ℓ` with
/// `i < M_ℓ`, so consecutive corrections share their middle value.
pub fn coupled_mlmc_estimate(
    schedule: &LevelSchedule,
    sampler: &dyn LevelSampler,
    root: &RandomStream,
) -> Result<EstimatorResult> {
    let counts = schedule.samples();
    if counts.windows(2).any(|w| w[1] > w[0]) {
        return Err(Error::InvalidArgument(format!(
            "coupled estimator needs non-increasing sample counts, got {counts:?}"
        )));
    }
    let start = Instant::now();
    let top_level = |i: usize| counts.iter().rposition(|&m| m > i).unwrap_or(0);
    let outcomes: Vec<Result<(Vec<f64>, Duration)>> = (0..counts[0])
        .into_par_iter()
        .map(|i| {
            let t = Instant::now();
            let top = top_level(i);
            let stream = realization_stream(root, 0, i);
            let v = sampler
                .sample_levels(schedule, 0, top, &stream)
                .map_err(|e| Error::Sample { level: top, index: i, source: Box::new(e) })?;
            Ok((v, t.elapsed()))
        })
        .collect();

    let n_levels = counts.len();
    let mut corrections: Vec<Vec<f64>> = counts.iter().map(|&m| Vec::with_capacity(m)).collect();
    let mut times = vec![Duration::ZERO; n_levels];
    for (i, outcome) in outcomes.into_iter().enumerate() {
        let (v, dt) = outcome?;
        times[v.len() - 1] += dt;
        for l in 0..v.len() {
            debug_assert!(i < counts[l]);
            corrections[l].push(if l == 0 { v[0] } else { v[l] - v[l - 1] });
        }
    }
    let levels: Vec<LevelStats> = (0..n_levels)
        .map(|l| level_stats(l, &corrections[l], times[l]))
        .collect();
    let covariances = (0..n_levels)
        .map(|j| (0..n_levels).map(|k| covariance(&corrections[j], &corrections[k])).collect())
        .collect();
    Ok(EstimatorResult {
        value: levels.iter().map(|l| l.mean).sum(),
        levels,
        covariances: Some(covariances),
        wall_time: start.elapsed(),
    })
}
