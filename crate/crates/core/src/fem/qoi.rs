use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::geometry::Point;
use crate::mesh::Mesh;

use super::assembly::DiscreteSystem;
use super::timestep::Trajectory;

/// How the spatial functional is reduced in time.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TimeRule {
    /// Evaluate at the final time.
    #[default]
    Terminal,
    /// Trapezoidal rule over `[0, T]`.
    Integral,
}

/// Quantity of interest `∫ u(x) w(x) dx`, reduced in time by `time_rule`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct QoISpec {
    pub weight: Expr,
    pub time_rule: TimeRule,
}

impl Default for QoISpec {
    fn default() -> Self {
        QoISpec {
            weight: Expr::parse("exp(-0.25*((x-0.25)^2+(y-0.75)^2))").expect("default weight"),
            time_rule: TimeRule::Terminal,
        }
    }
}

impl QoISpec {
    /// Rejects weights that are not finite on a 33x33 lattice.
    pub fn validate(&self) -> Result<()> {
        for j in 0..=32 {
            for i in 0..=32 {
                let p = Point::new(i as f64 / 32.0, j as f64 / 32.0);
                if !self.weight.eval(p, 0.0).is_finite() {
                    return Err(Error::Config(format!(
                        "QoI weight is not finite at ({}, {})",
                        p.x, p.y
                    )));
                }
            }
        }
        Ok(())
    }

    /// Per-vertex weights `g_v = Σ_{K ∋ v} w(x_K) |K| / 3`, so that the
    /// centroid rule applied to a P1 function `u` is `Σ g_v u_v`.
    pub fn vertex_weights(&self, mesh: &Mesh) -> Vec<f64> {
        let mut g = vec![0.0; mesh.vertices().len()];
        for (k, tri) in mesh.triangles().iter().enumerate() {
            let share = self.weight.eval(mesh.centroid(k), 0.0) * mesh.area(k) / 3.0;
            for &v in tri {
                g[v] += share;
            }
        }
        g
    }

    /// Spatial functional of a nodal vector over all vertices.
    pub fn functional(&self, mesh: &Mesh, nodal: &[f64]) -> Result<f64> {
        if nodal.len() != mesh.vertices().len() {
            return Err(Error::DimensionMismatch {
                expected: mesh.vertices().len(),
                got: nodal.len(),
            });
        }
        Ok(self.vertex_weights(mesh).iter().zip(nodal).map(|(g, u)| g * u).sum())
    }
}

/// Quantity of interest of a trajectory of `system`.
pub fn evaluate_qoi(traj: &Trajectory, system: &DiscreteSystem, spec: &QoISpec) -> f64 {
    let g = spec.vertex_weights(system.mesh());
    let reduced: Vec<f64> = system.free_dofs().iter().map(|&v| g[v]).collect();
    let spatial = |c: &[f64]| -> f64 { reduced.iter().zip(c).map(|(g, u)| g * u).sum() };
    match spec.time_rule {
        TimeRule::Terminal => spatial(traj.terminal()),
        TimeRule::Integral => {
            let values: Vec<f64> = traj.coefficients().iter().map(|c| spatial(c)).collect();
            let n = values.len() - 1;
            let inner: f64 = values[1..n].iter().sum();
            traj.dt() * (0.5 * (values[0] + values[n]) + inner)
        }
    }
}
