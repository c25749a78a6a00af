use std::path::Path;
use std::time::Duration;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::config::{Discretization, EstimatorKind, MethodSpec};
use crate::error::{Error, Result};
use crate::fem::PathSolver;
use crate::rng::RandomStream;

use super::estimator::{coupled_mlmc_estimate, mlmc_estimate, EstimatorResult, LevelSampler};
use super::schedule::{build_schedule, default_c_rho, LevelSchedule};

/// Child key of the root stream reserved for the reference run.
const REFERENCE_KEY: u64 = 0x5245_4645_5245_4e43;

/// Run one estimator of the given kind.
pub fn run_estimator(
    kind: EstimatorKind,
    schedule: &LevelSchedule,
    sampler: &dyn LevelSampler,
    root: &RandomStream,
) -> Result<EstimatorResult> {
    match kind {
        EstimatorKind::Standard => mlmc_estimate(schedule, sampler, root),
        EstimatorKind::Coupled => coupled_mlmc_estimate(schedule, sampler, root),
    }
}

/// One estimator replication.
#[derive(Debug, Clone, PartialEq)]
pub struct StudyRow {
    pub method: MethodSpec,
    pub level: usize,
    pub h_bar: f64,
    pub rep: usize,
    pub estimate: f64,
    pub reference: f64,
    pub rel_error: f64,
    pub wall_time: Duration,
}

/// Relative RMSE over the replications of one method and level.
#[derive(Debug, Clone, PartialEq)]
pub struct SummaryRow {
    pub method: MethodSpec,
    pub level: usize,
    pub h_bar: f64,
    pub reps: usize,
    pub rmse: f64,
    pub mean_wall_time: Duration,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct StudyTable {
    pub rows: Vec<StudyRow>,
    pub summary: Vec<SummaryRow>,
}

impl StudyTable {
    /// Least-squares slope of `log rmse` against `log h̄_L` for `method`.
    pub fn slope(&self, method: MethodSpec) -> Option<f64> {
        let (x, y): (Vec<f64>, Vec<f64>) = self
            .summary
            .iter()
            .filter(|s| s.method == method)
            .map(|s| (s.h_bar, s.rmse))
            .unzip();
        loglog_slope(&x, &y)
    }

    pub fn methods(&self) -> Vec<MethodSpec> {
        let mut m: Vec<MethodSpec> = self.summary.iter().map(|s| s.method).collect();
        m.dedup();
        m
    }
}

/// Least-squares slope of `log y` against `log x` over the positive pairs;
/// `None` with fewer than two.
pub fn loglog_slope(x: &[f64], y: &[f64]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = x
        .iter()
        .zip(y)
        .filter(|(a, b)| **a > 0.0 && **b > 0.0)
        .map(|(a, b)| (a.ln(), b.ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

/// Stream of replication `rep` of `method` at maximum level `level`.
pub fn replication_stream(
    root: &RandomStream,
    method: Discretization,
    level: usize,
    rep: usize,
) -> RandomStream {
    let tag = match method {
        Discretization::Adapted => 1,
        Discretization::Nonadapted => 2,
    };
    root.child(tag).child(level as u64).child(rep as u64)
}

/// Shape of a convergence study.
#[derive(Debug, Clone, PartialEq)]
pub struct StudyPlan {
    pub methods: Vec<MethodSpec>,
    pub levels: Vec<usize>,
    pub reps: usize,
    pub kappa: f64,
}

/// Independent replications of each estimator for each maximum level,
/// with relative errors against `reference`.
///
/// `progress` is called after every replication.
pub fn rmse_study(
    plan: &StudyPlan,
    reference: f64,
    sampler: &dyn LevelSampler,
    root: &RandomStream,
    progress: &mut dyn FnMut(&StudyRow),
) -> Result<StudyTable> {
    if !(reference.is_finite() && reference != 0.0) {
        return Err(Error::InvalidArgument(format!(
            "reference must be finite and non-zero, got {reference}"
        )));
    }
    let mut table = StudyTable::default();
    for &method in &plan.methods {
        for &level in &plan.levels {
            let disc = method.discretization;
            let schedule = build_schedule(level, disc, plan.kappa, default_c_rho(disc))?;
            let h_bar = schedule.h_bar(level);
            let mut sq = 0.0;
            let mut time = Duration::ZERO;
            for rep in 0..plan.reps {
                let stream = replication_stream(root, disc, level, rep);
                let result = run_estimator(method.estimator, &schedule, sampler, &stream)?;
                let row = StudyRow {
                    method,
                    level,
                    h_bar,
                    rep,
                    estimate: result.value,
                    reference,
                    rel_error: (result.value - reference) / reference,
                    wall_time: result.wall_time,
                };
                sq += (result.value - reference).powi(2);
                time += result.wall_time;
                progress(&row);
                table.rows.push(row);
            }
            table.summary.push(SummaryRow {
                method,
                level,
                h_bar,
                reps: plan.reps,
                rmse: (sq / plan.reps as f64).sqrt() / reference.abs(),
                mean_wall_time: time / plan.reps.max(1) as u32,
            });
        }
    }
    Ok(table)
}

/// Reference value of the quantity of interest.
#[derive(Debug, Clone, PartialEq)]
pub struct Reference {
    pub value: f64,
    pub level: usize,
    pub fingerprint: String,
    /// Loaded from the cache rather than computed.
    pub cached: bool,
    /// A cache file existed but belonged to a different configuration.
    pub replaced_stale: bool,
}

#[derive(Debug, Serialize, Deserialize)]
struct CacheRecord {
    fingerprint: String,
    level: usize,
    value: f64,
}

/// File name of the reference cache inside a cache directory.
pub const REFERENCE_CACHE_FILE: &str = "reference.json";

/// Adapted standard estimator at `level`, cached under `cache_dir` keyed by
/// the configuration fingerprint, the level and the root stream.
pub fn compute_reference(
    solver: &PathSolver,
    level: usize,
    root: &RandomStream,
    cache_dir: Option<&Path>,
) -> Result<Reference> {
    let problem = solver.problem();
    let fingerprint = {
        let text = format!("{}:{level}:{}", problem.fingerprint(), root.key_hex());
        Sha256::digest(text.as_bytes())
            .iter()
            .map(|b| format!("{b:02x}"))
            .collect::<String>()
    };
    let path = cache_dir.map(|d| d.join(REFERENCE_CACHE_FILE));
    let mut replaced_stale = false;
    if let Some(path) = &path {
        if path.exists() {
            let text = std::fs::read_to_string(path)?;
            match serde_json::from_str::<CacheRecord>(&text) {
                Ok(rec) if rec.fingerprint == fingerprint && rec.level == level => {
                    return Ok(Reference {
                        value: rec.value,
                        level,
                        fingerprint,
                        cached: true,
                        replaced_stale: false,
                    });
                }
                _ => replaced_stale = true,
            }
        }
    }
    let disc = Discretization::Adapted;
    let schedule = build_schedule(level, disc, problem.kappa, default_c_rho(disc))?;
    let value = mlmc_estimate(&schedule, solver, &root.child(REFERENCE_KEY))?.value;
    if let Some(path) = &path {
        if let Some(dir) = path.parent() {
            std::fs::create_dir_all(dir)?;
        }
        let rec = CacheRecord {
            fingerprint: fingerprint.clone(),
            level,
            value,
        };
        std::fs::write(path, serde_json::to_string_pretty(&rec)?)?;
    }
    Ok(Reference {
        value,
        level,
        fingerprint,
        cached: false,
        replaced_stale,
    })
}
