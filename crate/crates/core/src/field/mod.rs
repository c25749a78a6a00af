//! Gaussian random fields with Matérn covariance on nested lattices.

mod covariance;
mod embedding;
mod grid;

pub use covariance::{matern_cov, CovarianceSpec};
pub use embedding::{CirculantEmbedding, CLIP_TOLERANCE, PADDING_FACTORS};
pub use grid::{GridField, SampleGrid};

use crate::rng::RandomStream;

/// Draw a field realization from a prepared embedding.
pub fn sample_grf(embedding: &CirculantEmbedding, stream: &RandomStream) -> GridField {
    embedding.sample(stream)
}
