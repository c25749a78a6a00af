//! Level schedules, standard and coupled multilevel estimators, and
//! convergence studies.

mod estimator;
mod schedule;
mod study;
mod synthetic;

pub use estimator::{
    coupled_mlmc_estimate, mlmc_estimate, realization_stream, EstimatorResult, LevelSampler,
    LevelStats,
};
pub use schedule::{
    build_schedule, default_c_rho, level_weights, LevelSchedule, LevelSpec, WEIGHT_EXPONENT,
};
pub use study::{
    compute_reference, loglog_slope, replication_stream, rmse_study, run_estimator, Reference,
    StudyPlan, StudyRow, StudyTable, SummaryRow, REFERENCE_CACHE_FILE,
};
pub use synthetic::GaussianModel;
