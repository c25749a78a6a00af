use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use crate::config::{Discretization, ProblemConfig};
use crate::error::{Error, Result};
use crate::field::{CirculantEmbedding, SampleGrid};
use crate::jump::{
    sample_jump_heights, sample_partition_quadrangles, CoefficientModel, CoefficientSample,
    Partition,
};
use crate::mesh::{triangulate_adapted, triangulate_uniform, Mesh};
use crate::rng::{Purpose, RandomStream};

use super::assembly::{assemble, interpolate_initial};
use super::qoi::evaluate_qoi;
use super::timestep::backward_euler;

/// Discretization parameters of one level: mesh diameter bound, field
/// lattice spacing and time step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LevelParams {
    pub h_bar: f64,
    pub eps: f64,
    pub dt: f64,
}

/// Mesh for one realization: interface-fitted or structured.
pub fn build_mesh(method: Discretization, partition: &Partition, h_bar: f64) -> Result<Mesh> {
    match method {
        Discretization::Adapted => triangulate_adapted(partition, h_bar),
        Discretization::Nonadapted => triangulate_uniform(h_bar),
    }
}

/// Samples and solves realizations of one problem. Circulant embeddings are
/// built once per lattice and shared across threads.
#[derive(Debug)]
pub struct PathSolver {
    problem: ProblemConfig,
    model: Arc<CoefficientModel>,
    embeddings: Mutex<HashMap<usize, Arc<CirculantEmbedding>>>,
}

impl PathSolver {
    pub fn new(problem: &ProblemConfig) -> Result<Self> {
        problem.validate()?;
        Ok(PathSolver {
            problem: problem.clone(),
            model: Arc::new(problem.coefficient_model()),
            embeddings: Mutex::new(HashMap::new()),
        })
    }

    pub fn problem(&self) -> &ProblemConfig {
        &self.problem
    }

    /// Embedding for the lattice with spacing at most `eps`.
    pub fn embedding(&self, eps: f64) -> Result<Arc<CirculantEmbedding>> {
        let grid = SampleGrid::from_spacing(eps, 0)?;
        let mut cache = self.embeddings.lock().expect("embedding cache poisoned");
        if let Some(e) = cache.get(&grid.cells()) {
            return Ok(Arc::clone(e));
        }
        let e = Arc::new(CirculantEmbedding::build(grid, self.problem.covariance)?);
        cache.insert(grid.cells(), Arc::clone(&e));
        Ok(e)
    }

    /// Draw one realization with its field on the `eps` lattice.
    pub fn draw(&self, eps: f64, stream: &RandomStream) -> Result<CoefficientSample> {
        let embedding = self.embedding(eps).map_err(Error::at_stage("field"))?;
        let field = embedding.sample(&stream.purpose(Purpose::Field));
        let partition = sample_partition_quadrangles(&stream.purpose(Purpose::Partition));
        let jumps = sample_jump_heights(&partition, &self.problem.jumps, &stream.purpose(Purpose::Jumps))
            .map_err(Error::at_stage("jumps"))?;
        CoefficientSample::new(field, Arc::new(partition), Arc::new(jumps), Arc::clone(&self.model))
    }

    /// Quantity of interest of `sample` discretized with `params`.
    pub fn solve(
        &self,
        sample: &CoefficientSample,
        params: &LevelParams,
        method: Discretization,
    ) -> Result<f64> {
        let p = &self.problem;
        let mesh = build_mesh(method, sample.partition(), params.h_bar).map_err(Error::at_stage("mesh"))?;
        let system = assemble(Arc::new(mesh), sample, &p.f)
            .map_err(Error::at_stage("assembly"))?
            .with_solver(p.solver);
        let initial = interpolate_initial(&system, &p.u0);
        let traj = backward_euler(&system, &initial, p.t_final, params.dt)
            .map_err(Error::at_stage("time stepping"))?;
        Ok(evaluate_qoi(&traj, &system, &p.qoi))
    }

    /// One realization evaluated on consecutive levels `params[0]` (coarsest)
    /// to `params[last]` (finest). The field is drawn on the finest lattice
    /// and restricted to coarser ones, so every evaluation sees the same
    /// partition, jump heights and nested field values.
    pub fn solve_levels(
        &self,
        params: &[LevelParams],
        method: Discretization,
        stream: &RandomStream,
    ) -> Result<Vec<f64>> {
        let Some(finest) = params.last() else {
            return Ok(Vec::new());
        };
        let mut sample = self.draw(finest.eps, stream)?;
        let mut out = vec![0.0; params.len()];
        for (k, level) in params.iter().enumerate().rev() {
            let cells = SampleGrid::from_spacing(level.eps, 0)?.cells();
            while sample.field().grid().cells() > cells {
                sample = sample.coarsen().map_err(Error::at_stage("field"))?;
            }
            if sample.field().grid().cells() != cells {
                return Err(Error::Stage {
                    stage: "field",
                    source: Box::new(Error::InvalidArgument(format!(
                        "field lattices are not nested: cannot restrict to {cells} cells"
                    ))),
                });
            }
            out[k] = self.solve(&sample, level, method)?;
        }
        Ok(out)
    }
}

/// Quantity of interest of one realization drawn from `stream`.
pub fn solve_path(
    params: &LevelParams,
    method: Discretization,
    stream: &RandomStream,
    problem: &ProblemConfig,
) -> Result<f64> {
    Ok(PathSolver::new(problem)?.solve_levels(std::slice::from_ref(params), method, stream)?[0])
}
