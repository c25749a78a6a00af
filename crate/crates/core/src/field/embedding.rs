use std::fmt;
use std::sync::Arc;

use rand_distr::{Distribution, StandardNormal};
use rustfft::num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use super::covariance::{matern_unchecked, CovarianceSpec};
use super::grid::{GridField, SampleGrid};
use crate::error::{Error, Result};
use crate::rng::RandomStream;

/// Padding factors tried in order.
pub const PADDING_FACTORS: [usize; 3] = [2, 4, 8];
/// Negative eigenvalues with magnitude below this fraction of the largest one
/// are clipped to zero once the largest padding has been tried.
pub const CLIP_TOLERANCE: f64 = 1e-8;
/// Negative eigenvalues this small relative to the largest are roundoff and
/// are clipped at any padding.
const ROUNDOFF_TOLERANCE: f64 = 1e-13;

/// Spectrum of the block-circulant extension of a lattice covariance matrix.
#[derive(Clone)]
pub struct CirculantEmbedding {
    grid: SampleGrid,
    spec: CovarianceSpec,
    size: usize,
    padding: usize,
    eigenvalues: Vec<f64>,
    clipped: usize,
    fft: Arc<dyn Fft<f64>>,
}

impl fmt::Debug for CirculantEmbedding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CirculantEmbedding")
            .field("grid", &self.grid)
            .field("size", &self.size)
            .field("padding", &self.padding)
            .field("clipped", &self.clipped)
            .finish()
    }
}

fn fft2(data: &mut [Complex64], n: usize, fft: &dyn Fft<f64>) {
    let mut scratch = vec![Complex64::default(); fft.get_inplace_scratch_len()];
    for row in data.chunks_exact_mut(n) {
        fft.process_with_scratch(row, &mut scratch);
    }
    let mut col = vec![Complex64::default(); n];
    for i in 0..n {
        for j in 0..n {
            col[j] = data[j * n + i];
        }
        fft.process_with_scratch(&mut col, &mut scratch);
        for j in 0..n {
            data[j * n + i] = col[j];
        }
    }
}

fn embedding_spectrum(
    grid: &SampleGrid,
    spec: &CovarianceSpec,
    size: usize,
    fft: &dyn Fft<f64>,
) -> Vec<f64> {
    let h = grid.spacing();
    let half = size / 2;
    // covariance only depends on wrapped |di|, |dj|
    let mut table = vec![0.0; (half + 1) * (half + 1)];
    for dj in 0..=half {
        for di in 0..=half {
            let r = h * ((di * di + dj * dj) as f64).sqrt();
            table[dj * (half + 1) + di] = matern_unchecked(r, spec);
        }
    }
    let wrap = |k: usize| if k <= half { k } else { size - k };
    let mut data = vec![Complex64::default(); size * size];
    for j in 0..size {
        for i in 0..size {
            data[j * size + i] = Complex64::new(table[wrap(j) * (half + 1) + wrap(i)], 0.0);
        }
    }
    fft2(&mut data, size, fft);
    data.into_iter().map(|c| c.re).collect()
}

impl CirculantEmbedding {
    pub fn build(grid: SampleGrid, spec: CovarianceSpec) -> Result<Self> {
        spec.validate()?;
        let mut planner = FftPlanner::new();
        let mut last_min = 0.0;
        for (attempt, &padding) in PADDING_FACTORS.iter().enumerate() {
            let size = padding * grid.cells();
            let fft = planner.plan_fft_forward(size);
            let mut eigenvalues = embedding_spectrum(&grid, &spec, size, fft.as_ref());
            let max = eigenvalues.iter().cloned().fold(f64::MIN, f64::max);
            let min = eigenvalues.iter().cloned().fold(f64::MAX, f64::min);
            last_min = min;
            let last = attempt + 1 == PADDING_FACTORS.len();
            let tolerance = if last { CLIP_TOLERANCE } else { ROUNDOFF_TOLERANCE };
            if min >= -tolerance * max {
                let mut clipped = 0;
                for v in eigenvalues.iter_mut().filter(|v| **v < 0.0) {
                    *v = 0.0;
                    clipped += 1;
                }
                return Ok(CirculantEmbedding {
                    grid,
                    spec,
                    size,
                    padding,
                    eigenvalues,
                    clipped,
                    fft,
                });
            }
        }
        Err(Error::NotPositiveDefinite {
            min_eigenvalue: last_min,
            padding: *PADDING_FACTORS.last().unwrap(),
        })
    }

    pub fn grid(&self) -> &SampleGrid {
        &self.grid
    }

    pub fn spec(&self) -> &CovarianceSpec {
        &self.spec
    }

    /// Periodic lattice size per dimension.
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn padding(&self) -> usize {
        self.padding
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// Number of eigenvalues set to zero.
    pub fn clipped(&self) -> usize {
        self.clipped
    }

    /// Draw one zero-mean field on the lattice.
    pub fn sample(&self, stream: &RandomStream) -> GridField {
        let n = self.size;
        let scale = 1.0 / (n * n) as f64;
        let mut rng = stream.rng();
        let mut data: Vec<Complex64> = self
            .eigenvalues
            .iter()
            .map(|&lambda| {
                let re: f64 = StandardNormal.sample(&mut rng);
                let im: f64 = StandardNormal.sample(&mut rng);
                Complex64::new(re, im) * (lambda * scale).sqrt()
            })
            .collect();
        fft2(&mut data, n, self.fft.as_ref());
        let side = self.grid.points_per_side();
        let mut values = Vec::with_capacity(self.grid.len());
        for j in 0..side {
            for i in 0..side {
                values.push(data[j * n + i].re);
            }
        }
        GridField::new(self.grid, values).expect("lattice size matches")
    }
}
