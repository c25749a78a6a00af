//! Piecewise linear finite elements in space, backward Euler in time.

mod assembly;
mod path;
mod qoi;
mod timestep;

pub use assembly::{
    assemble, assemble_unconstrained, element_stiffness, interpolate_initial, Coefficients,
    ConstantCoefficients, DiscreteSystem,
};
pub use path::{build_mesh, solve_path, LevelParams, PathSolver};
pub use qoi::{evaluate_qoi, QoISpec, TimeRule};
pub use timestep::{backward_euler, step_count, Trajectory};
