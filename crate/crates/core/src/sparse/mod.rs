//! Sparse matrices and linear solvers.
//!
//! [`Factorization`] reorders with reverse Cuthill-McKee and factors the
//! band with partial pivoting; [`SolverKind::Bicgstab`] is an iterative
//! alternative. Every solve verifies its residual.

mod band;
mod bicgstab;
mod csr;
mod ordering;

pub use band::BandLu;
pub use bicgstab::bicgstab;
pub use csr::SparseMatrix;
pub use ordering::{bandwidths, reverse_cuthill_mckee};

use crate::error::{Error, Result};

/// Relative residual every returned solution satisfies.
pub const RESIDUAL_TOLERANCE: f64 = 1e-10;

/// Linear solver used for the time-stepping systems.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SolverKind {
    #[default]
    Direct,
    Bicgstab,
}

#[derive(Debug, Clone)]
enum Inner {
    Direct { lu: BandLu, perm: Vec<usize> },
    Iterative,
}

/// A matrix prepared for repeated solves.
#[derive(Debug, Clone)]
pub struct Factorization {
    matrix: SparseMatrix,
    inner: Inner,
}

fn residual_norm(a: &SparseMatrix, x: &[f64], b: &[f64], r: &mut [f64]) -> f64 {
    a.spmv_into(x, r);
    let mut s = 0.0;
    for (ri, bi) in r.iter_mut().zip(b) {
        *ri = bi - *ri;
        s += *ri * *ri;
    }
    s.sqrt()
}

impl Factorization {
    pub fn new(matrix: &SparseMatrix, kind: SolverKind) -> Result<Self> {
        if matrix.rows() != matrix.cols() {
            return Err(Error::DimensionMismatch {
                expected: matrix.rows(),
                got: matrix.cols(),
            });
        }
        let inner = match kind {
            SolverKind::Direct => {
                let perm = reverse_cuthill_mckee(matrix);
                let (kl, ku) = bandwidths(matrix, &perm);
                let mut inverse = vec![0usize; perm.len()];
                for (new, &old) in perm.iter().enumerate() {
                    inverse[old] = new;
                }
                let lu = BandLu::factor(matrix, &inverse, kl, ku)?;
                Inner::Direct { lu, perm }
            }
            SolverKind::Bicgstab => Inner::Iterative,
        };
        Ok(Factorization {
            matrix: matrix.clone(),
            inner,
        })
    }

    pub fn matrix(&self) -> &SparseMatrix {
        &self.matrix
    }

    fn direct(&self, lu: &BandLu, perm: &[usize], b: &[f64]) -> Vec<f64> {
        let mut work: Vec<f64> = perm.iter().map(|&old| b[old]).collect();
        lu.solve_in_place(&mut work);
        let mut x = vec![0.0; b.len()];
        for (new, &old) in perm.iter().enumerate() {
            x[old] = work[new];
        }
        x
    }

    /// Solve `A x = b`, failing if the relative residual exceeds
    /// [`RESIDUAL_TOLERANCE`].
    pub fn solve(&self, b: &[f64]) -> Result<Vec<f64>> {
        let n = self.matrix.rows();
        if b.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: b.len(),
            });
        }
        let b_norm = b.iter().map(|v| v * v).sum::<f64>().sqrt();
        if b_norm == 0.0 {
            return Ok(vec![0.0; n]);
        }
        let mut r = vec![0.0; n];
        let mut x = match &self.inner {
            Inner::Direct { lu, perm } => self.direct(lu, perm, b),
            Inner::Iterative => {
                let mut x = vec![0.0; n];
                bicgstab(&self.matrix, b, &mut x, RESIDUAL_TOLERANCE * 0.5, 10 * n.max(1))?;
                x
            }
        };
        let mut res = residual_norm(&self.matrix, &x, b, &mut r);
        if let Inner::Direct { lu, perm } = &self.inner {
            // a couple of refinement sweeps rescue ill-conditioned systems
            for _ in 0..2 {
                if res <= RESIDUAL_TOLERANCE * b_norm {
                    break;
                }
                let dx = self.direct(lu, perm, &r);
                for (xi, d) in x.iter_mut().zip(dx) {
                    *xi += d;
                }
                res = residual_norm(&self.matrix, &x, b, &mut r);
            }
        }
        if res.is_nan() || res > RESIDUAL_TOLERANCE * b_norm {
            return Err(Error::Solver {
                reason: "residual above tolerance".into(),
                residual: res / b_norm,
            });
        }
        Ok(x)
    }
}

/// One-shot direct solve.
pub fn solve(a: &SparseMatrix, b: &[f64]) -> Result<Vec<f64>> {
    Factorization::new(a, SolverKind::Direct)?.solve(b)
}
