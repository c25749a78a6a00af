//! Fixtures shared by the benchmarks.

use jumpmc_core::config::Discretization;
use jumpmc_core::fem::{LevelParams, PathSolver};
use jumpmc_core::jump::{sample_partition_quadrangles, Partition};
use jumpmc_core::mlmc::{build_schedule, default_c_rho};
use jumpmc_core::{ProblemConfig, RandomStream};

/// Refinement parameters of `level` in the default schedule of `method`.
pub fn level_params(method: Discretization, level: usize) -> LevelParams {
    build_schedule(level, method, 1.0, default_c_rho(method))
        .expect("default schedule")
        .params()[level]
}

/// A fixed sampled partition.
pub fn partition(seed: u64) -> Partition {
    sample_partition_quadrangles(&RandomStream::from_seed(seed))
}

/// Path solver for the reference problem.
pub fn solver() -> PathSolver {
    PathSolver::new(&ProblemConfig::default()).expect("default problem is valid")
}
