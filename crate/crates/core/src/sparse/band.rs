//! Banded LU factorization with partial pivoting.

use crate::error::{Error, Result};

use super::SparseMatrix;

/// LU factors of a band matrix, stored column-major in the layout of
/// LAPACK's `gbtrf` (extra `kl` super-diagonals hold pivoting fill).
#[derive(Debug, Clone)]
pub struct BandLu {
    n: usize,
    kl: usize,
    ku: usize,
    ab: Vec<f64>,
    pivots: Vec<usize>,
}

impl BandLu {
    fn ld(&self) -> usize {
        2 * self.kl + self.ku + 1
    }

    /// Factor `a` whose lower/upper bandwidths under `inverse` (old -> new
    /// index) are `kl` and `ku`.
    pub fn factor(a: &SparseMatrix, inverse: &[usize], kl: usize, ku: usize) -> Result<Self> {
        let n = a.rows();
        let ld = 2 * kl + ku + 1;
        let kv = kl + ku;
        let mut ab = vec![0.0; ld * n];
        for i in 0..n {
            let (idx, val) = a.row(i);
            let pi = inverse[i];
            for (&j, &v) in idx.iter().zip(val) {
                let pj = inverse[j];
                ab[kv + pi - pj + pj * ld] += v;
            }
        }

        let mut pivots = vec![0usize; n];
        let mut ju = 0usize;
        for j in 0..n {
            let km = kl.min(n - 1 - j);
            let col = j * ld + kv;
            let mut jp = 0;
            let mut best = ab[col].abs();
            for r in 1..=km {
                if ab[col + r].abs() > best {
                    best = ab[col + r].abs();
                    jp = r;
                }
            }
            pivots[j] = j + jp;
            if best == 0.0 || !best.is_finite() {
                return Err(Error::Solver {
                    reason: format!("singular matrix at column {j}"),
                    residual: f64::NAN,
                });
            }
            ju = ju.max((j + ku + jp).min(n - 1));
            if jp != 0 {
                for c in j..=ju {
                    ab.swap(kv + j - c + c * ld, kv + j + jp - c + c * ld);
                }
            }
            if km > 0 {
                let piv = ab[col];
                for r in 1..=km {
                    ab[col + r] /= piv;
                }
                for c in j + 1..=ju {
                    let u = ab[kv + j - c + c * ld];
                    if u != 0.0 {
                        for r in 1..=km {
                            ab[kv + j + r - c + c * ld] -= ab[col + r] * u;
                        }
                    }
                }
            }
        }
        Ok(BandLu {
            n,
            kl,
            ku,
            ab,
            pivots,
        })
    }

    /// Solve in place; `b` is in the permuted ordering.
    pub fn solve_in_place(&self, b: &mut [f64]) {
        let (n, kl, ld) = (self.n, self.kl, self.ld());
        let kv = kl + self.ku;
        for j in 0..n {
            let p = self.pivots[j];
            if p != j {
                b.swap(j, p);
            }
            let bj = b[j];
            if bj != 0.0 {
                let km = kl.min(n - 1 - j);
                let col = j * ld + kv;
                for r in 1..=km {
                    b[j + r] -= self.ab[col + r] * bj;
                }
            }
        }
        for j in (0..n).rev() {
            b[j] /= self.ab[kv + j * ld];
            let bj = b[j];
            if bj != 0.0 {
                let lo = j.saturating_sub(kv);
                for (i, bi) in (lo..j).zip(&mut b[lo..j]) {
                    *bi -= self.ab[kv + i - j + j * ld] * bj;
                }
            }
        }
    }
}
