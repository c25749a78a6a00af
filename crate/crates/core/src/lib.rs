//! Multilevel Monte Carlo estimation for parabolic advection-diffusion
//! problems with random jump coefficients.
//!
//! The pipeline for one sample is: draw a Gaussian field on a nested lattice
//! ([`field`]), a random partition with jump heights ([`jump`]), build a mesh
//! that resolves the partition interfaces ([`mesh`]), assemble and integrate
//! the finite element system in time ([`fem`]), and reduce to a scalar
//! quantity of interest. [`mlmc`] combines samples across levels.

pub mod config;
pub mod error;
pub mod expr;
pub mod fem;
pub mod field;
pub mod geometry;
pub mod jump;
pub mod mesh;
pub mod mlmc;
pub mod rng;
pub mod sparse;

pub use config::ProblemConfig;
pub use error::{Error, Result};
pub use geometry::Point;
pub use rng::RandomStream;
