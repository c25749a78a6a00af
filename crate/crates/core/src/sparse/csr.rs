use crate::error::{Error, Result};

/// Compressed sparse row matrix with sorted, unique column indices per row.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseMatrix {
    rows: usize,
    cols: usize,
    offsets: Vec<usize>,
    indices: Vec<usize>,
    values: Vec<f64>,
}

impl SparseMatrix {
    /// Square matrix from `(row, col, value)` triplets; duplicates are summed.
    pub fn from_triplets(n: usize, triplets: &[(usize, usize, f64)]) -> Result<Self> {
        Self::from_triplets_rect(n, n, triplets)
    }

    pub fn from_triplets_rect(
        rows: usize,
        cols: usize,
        triplets: &[(usize, usize, f64)],
    ) -> Result<Self> {
        let mut counts = vec![0usize; rows + 1];
        for &(i, j, _) in triplets {
            if i >= rows || j >= cols {
                return Err(Error::IndexOutOfRange {
                    row: i,
                    col: j,
                    rows,
                    cols,
                });
            }
            counts[i + 1] += 1;
        }
        for i in 0..rows {
            counts[i + 1] += counts[i];
        }
        let mut fill = counts.clone();
        let mut cols_tmp = vec![0usize; triplets.len()];
        let mut vals_tmp = vec![0.0; triplets.len()];
        for &(i, j, v) in triplets {
            cols_tmp[fill[i]] = j;
            vals_tmp[fill[i]] = v;
            fill[i] += 1;
        }

        let mut offsets = Vec::with_capacity(rows + 1);
        let mut indices = Vec::with_capacity(triplets.len());
        let mut values = Vec::with_capacity(triplets.len());
        offsets.push(0);
        let mut row: Vec<(usize, f64)> = Vec::new();
        for i in 0..rows {
            row.clear();
            row.extend((counts[i]..counts[i + 1]).map(|k| (cols_tmp[k], vals_tmp[k])));
            row.sort_by_key(|e| e.0);
            for &(j, v) in &row {
                if indices.len() > offsets[i] && *indices.last().unwrap() == j {
                    *values.last_mut().unwrap() += v;
                } else {
                    indices.push(j);
                    values.push(v);
                }
            }
            offsets.push(indices.len());
        }
        Ok(SparseMatrix {
            rows,
            cols,
            offsets,
            indices,
            values,
        })
    }

    pub fn identity(n: usize) -> Self {
        SparseMatrix {
            rows: n,
            cols: n,
            offsets: (0..=n).collect(),
            indices: (0..n).collect(),
            values: vec![1.0; n],
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    /// Column indices and values of row `i`.
    pub fn row(&self, i: usize) -> (&[usize], &[f64]) {
        let r = self.offsets[i]..self.offsets[i + 1];
        (&self.indices[r.clone()], &self.values[r])
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        let (idx, val) = self.row(i);
        idx.binary_search(&j).map(|k| val[k]).unwrap_or(0.0)
    }

    pub fn spmv(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                got: x.len(),
            });
        }
        let mut y = vec![0.0; self.rows];
        self.spmv_into(x, &mut y);
        Ok(y)
    }

    pub(crate) fn spmv_into(&self, x: &[f64], y: &mut [f64]) {
        for (i, yi) in y.iter_mut().enumerate() {
            let (idx, val) = self.row(i);
            *yi = idx.iter().zip(val).map(|(&j, &v)| v * x[j]).sum();
        }
    }

    /// `alpha * self + beta * other`.
    pub fn linear_combination(&self, alpha: f64, other: &SparseMatrix, beta: f64) -> Result<Self> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch {
                expected: self.rows,
                got: other.rows,
            });
        }
        let mut triplets = Vec::with_capacity(self.nnz() + other.nnz());
        for (m, s) in [(self, alpha), (other, beta)] {
            for i in 0..m.rows {
                let (idx, val) = m.row(i);
                triplets.extend(idx.iter().zip(val).map(|(&j, &v)| (i, j, s * v)));
            }
        }
        SparseMatrix::from_triplets_rect(self.rows, self.cols, &triplets)
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i)).collect()
    }

    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let mut d = vec![vec![0.0; self.cols]; self.rows];
        for (i, row) in d.iter_mut().enumerate() {
            let (idx, val) = self.row(i);
            for (&j, &v) in idx.iter().zip(val) {
                row[j] = v;
            }
        }
        d
    }

    pub fn is_symmetric(&self, tol: f64) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| {
                let (idx, val) = self.row(i);
                idx.iter()
                    .zip(val)
                    .all(|(&j, &v)| (v - self.get(j, i)).abs() <= tol * v.abs().max(1.0))
            })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn duplicates_summed() {
        let m = SparseMatrix::from_triplets(1, &[(0, 0, 1.0), (0, 0, 2.0)]).unwrap();
        assert_eq!(m.nnz(), 1);
        assert_eq!(m.get(0, 0), 3.0);
    }

    #[test]
    fn empty_is_zero() {
        let m = SparseMatrix::from_triplets(3, &[]).unwrap();
        assert_eq!(m.spmv(&[1.0, 2.0, 3.0]).unwrap(), vec![0.0; 3]);
    }

    #[test]
    fn identity_and_zero_vector() {
        let i = SparseMatrix::identity(4);
        let x = vec![1.0, -2.0, 3.5, 0.25];
        assert_eq!(i.spmv(&x).unwrap(), x);
        let m = SparseMatrix::from_triplets(2, &[(0, 1, 2.0), (1, 0, 3.0)]).unwrap();
        assert_eq!(m.spmv(&[0.0, 0.0]).unwrap(), vec![0.0, 0.0]);
    }

    #[test]
    fn errors() {
        assert!(matches!(
            SparseMatrix::from_triplets(2, &[(2, 0, 1.0)]),
            Err(Error::IndexOutOfRange { .. })
        ));
        let m = SparseMatrix::identity(3);
        assert!(matches!(m.spmv(&[1.0]), Err(Error::DimensionMismatch { .. })));
    }
}
