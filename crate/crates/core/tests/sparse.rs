use jumpmc_core::sparse::{solve, Factorization, SolverKind, SparseMatrix};
use proptest::prelude::*;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn dense_from(n: usize, triplets: &[(usize, usize, f64)]) -> Vec<Vec<f64>> {
    let mut d = vec![vec![0.0; n]; n];
    for &(i, j, v) in triplets {
        d[i][j] += v;
    }
    d
}

fn dense_mul(d: &[Vec<f64>], x: &[f64]) -> Vec<f64> {
    d.iter().map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum()).collect()
}

/// Gaussian elimination with partial pivoting on a dense copy.
fn dense_lu_solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Vec<f64> {
    let n = b.len();
    for k in 0..n {
        let p = (k..n).max_by(|&i, &j| a[i][k].abs().total_cmp(&a[j][k].abs())).unwrap();
        a.swap(k, p);
        b.swap(k, p);
        let (top, rest) = a.split_at_mut(k + 1);
        let pivot = &top[k];
        for (offset, row) in rest.iter_mut().enumerate() {
            let f = row[k] / pivot[k];
            for (x, p) in row[k..].iter_mut().zip(&pivot[k..]) {
                *x -= f * p;
            }
            b[k + 1 + offset] -= f * b[k];
        }
    }
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let s: f64 = (i + 1..n).map(|j| a[i][j] * x[j]).sum();
        x[i] = (b[i] - s) / a[i][i];
    }
    x
}

fn random_triplets(rng: &mut ChaCha8Rng, n: usize, count: usize) -> Vec<(usize, usize, f64)> {
    (0..count)
        .map(|_| (rng.random_range(0..n), rng.random_range(0..n), rng.random_range(-1.0..1.0)))
        .collect()
}

#[test]
fn triplets_match_dense_accumulation() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let t = random_triplets(&mut rng, 50, 600);
    let m = SparseMatrix::from_triplets(50, &t).unwrap();
    assert_eq!(m.to_dense(), dense_from(50, &t));
    for i in 0..50 {
        let (idx, _) = m.row(i);
        assert!(idx.windows(2).all(|w| w[0] < w[1]));
    }
}

#[test]
fn spmv_matches_dense_product() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let t = random_triplets(&mut rng, 50, 800);
    let m = SparseMatrix::from_triplets(50, &t).unwrap();
    let x: Vec<f64> = (0..50).map(|_| rng.random_range(-2.0..2.0)).collect();
    let want = dense_mul(&dense_from(50, &t), &x);
    let got = m.spmv(&x).unwrap();
    let scale = want.iter().fold(0.0f64, |s, v| s.max(v.abs()));
    for (g, w) in got.iter().zip(&want) {
        assert!((g - w).abs() <= 1e-13 * scale);
    }
}

#[test]
fn trivial_solves() {
    let d = SparseMatrix::from_triplets(1, &[(0, 0, 2.0)]).unwrap();
    assert_eq!(solve(&d, &[4.0]).unwrap(), vec![2.0]);
    let i = SparseMatrix::identity(5);
    let b = vec![1.0, -1.0, 0.5, 3.0, 0.0];
    assert_eq!(solve(&i, &b).unwrap(), b);
}

fn dominant_system(rng: &mut ChaCha8Rng, n: usize) -> (Vec<(usize, usize, f64)>, Vec<f64>) {
    let mut t = random_triplets(rng, n, 6 * n);
    let mut row_abs = vec![0.0; n];
    for &(i, _, v) in &t {
        row_abs[i] += f64::abs(v);
    }
    for (i, r) in row_abs.iter().enumerate() {
        t.push((i, i, r + 1.0));
    }
    let b = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
    (t, b)
}

#[test]
fn solvers_match_dense_lu() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let (t, b) = dominant_system(&mut rng, 50);
    let a = SparseMatrix::from_triplets(50, &t).unwrap();
    let want = dense_lu_solve(dense_from(50, &t), b.clone());
    for kind in [SolverKind::Direct, SolverKind::Bicgstab] {
        let got = Factorization::new(&a, kind).unwrap().solve(&b).unwrap();
        let scale = want.iter().fold(0.0f64, |s, v| s.max(v.abs()));
        for (g, w) in got.iter().zip(&want) {
            assert!((g - w).abs() <= 1e-9 * scale, "{kind:?}");
        }
    }
}

#[test]
fn singular_system_reports_failure() {
    let a = SparseMatrix::from_triplets(3, &[(0, 0, 1.0), (1, 1, 1.0), (2, 0, 1.0), (2, 1, 1.0)]).unwrap();
    let err = solve(&a, &[1.0, 1.0, 1.0]).unwrap_err();
    assert!(err.to_string().contains("singular"), "{err}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn dense_oracle_agreement(seed in any::<u64>(), n in 1usize..=100, density in 1usize..8) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let t = random_triplets(&mut rng, n, density * n);
        let m = SparseMatrix::from_triplets(n, &t).unwrap();
        let dense = dense_from(n, &t);
        prop_assert_eq!(m.to_dense(), dense.clone());
        let x: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
        let want = dense_mul(&dense, &x);
        for (g, w) in m.spmv(&x).unwrap().iter().zip(&want) {
            prop_assert!((g - w).abs() <= 1e-12 * (1.0 + w.abs()));
        }
    }

    #[test]
    fn residual_contract(seed in any::<u64>(), n in 1usize..=100) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (t, b) = dominant_system(&mut rng, n);
        let a = SparseMatrix::from_triplets(n, &t).unwrap();
        let x = solve(&a, &b).unwrap();
        let r: f64 = a.spmv(&x).unwrap().iter().zip(&b).map(|(ax, bi)| (ax - bi).powi(2)).sum::<f64>().sqrt();
        let bn: f64 = b.iter().map(|v| v * v).sum::<f64>().sqrt();
        prop_assert!(r <= 1e-10 * bn);
    }
}
