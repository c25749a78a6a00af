use crate::error::{Error, Result};
use crate::sparse::Factorization;

use super::assembly::DiscreteSystem;

/// Number of equidistant steps covering `[0, t_final]` with step at most `dt`.
pub fn step_count(t_final: f64, dt: f64) -> Result<usize> {
    if !(t_final.is_finite() && t_final > 0.0 && dt.is_finite() && dt > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "time grid needs positive T and dt, got T={t_final}, dt={dt}"
        )));
    }
    Ok(((t_final / dt) * (1.0 - 1e-12)).ceil().max(1.0) as usize)
}

/// Coefficient vectors on an equidistant time grid.
#[derive(Debug, Clone)]
pub struct Trajectory {
    t_final: f64,
    coefficients: Vec<Vec<f64>>,
}

impl Trajectory {
    pub fn new(t_final: f64, coefficients: Vec<Vec<f64>>) -> Result<Self> {
        if coefficients.len() < 2 {
            return Err(Error::InvalidArgument("a trajectory needs at least one step".into()));
        }
        Ok(Trajectory {
            t_final,
            coefficients,
        })
    }

    pub fn steps(&self) -> usize {
        self.coefficients.len() - 1
    }

    pub fn dt(&self) -> f64 {
        self.t_final / self.steps() as f64
    }

    pub fn t_final(&self) -> f64 {
        self.t_final
    }

    pub fn time(&self, i: usize) -> f64 {
        if i == self.steps() {
            self.t_final
        } else {
            i as f64 * self.dt()
        }
    }

    pub fn coefficients(&self) -> &[Vec<f64>] {
        &self.coefficients
    }

    pub fn terminal(&self) -> &[f64] {
        self.coefficients.last().expect("non-empty trajectory")
    }

    /// Piecewise linear interpolation in time; `t` is clamped to `[0, T]`.
    pub fn at(&self, t: f64) -> Vec<f64> {
        let s = (t / self.dt()).clamp(0.0, self.steps() as f64);
        let i = (s.floor() as usize).min(self.steps() - 1);
        let w = s - i as f64;
        self.coefficients[i]
            .iter()
            .zip(&self.coefficients[i + 1])
            .map(|(a, b)| (1.0 - w) * a + w * b)
            .collect()
    }
}

/// Backward Euler: `(M + dt A) c_i = dt F(t_i) + M c_{i-1}`.
///
/// `dt` is reduced to `T / n` for the smallest `n` with `T / n <= dt`.
pub fn backward_euler(
    system: &DiscreteSystem,
    initial: &[f64],
    t_final: f64,
    dt: f64,
) -> Result<Trajectory> {
    let n_dofs = system.free_dofs().len();
    if initial.len() != n_dofs {
        return Err(Error::DimensionMismatch {
            expected: n_dofs,
            got: initial.len(),
        });
    }
    let steps = step_count(t_final, dt)?;
    let dt = t_final / steps as f64;
    let mut coefficients = Vec::with_capacity(steps + 1);
    coefficients.push(initial.to_vec());
    if n_dofs == 0 {
        coefficients.resize(steps + 1, Vec::new());
        return Trajectory::new(t_final, coefficients);
    }

    let system_matrix = system.mass().linear_combination(1.0, system.stiffness(), dt)?;
    let factorization = Factorization::new(&system_matrix, system.solver())
        .map_err(|e| Error::TimeStep { step: 0, source: Box::new(e) })?;
    let mass = system.mass();
    let mut rhs = vec![0.0; n_dofs];
    for i in 1..=steps {
        let t = if i == steps { t_final } else { i as f64 * dt };
        let load = system.load(t);
        mass.spmv_into(&coefficients[i - 1], &mut rhs);
        for (r, l) in rhs.iter_mut().zip(&load) {
            *r += dt * l;
        }
        let next = factorization
            .solve(&rhs)
            .map_err(|e| Error::TimeStep { step: i, source: Box::new(e) })?;
        coefficients.push(next);
    }
    Trajectory::new(t_final, coefficients)
}
