//! Jacobi-preconditioned BiCGStab.

use crate::error::{Error, Result};

use super::SparseMatrix;

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Solve `a x = b` to relative residual `tol`, starting from `x`.
pub fn bicgstab(
    a: &SparseMatrix,
    b: &[f64],
    x: &mut [f64],
    tol: f64,
    max_iter: usize,
) -> Result<usize> {
    let n = b.len();
    let inv_diag: Vec<f64> = a
        .diagonal()
        .iter()
        .map(|&d| if d != 0.0 { 1.0 / d } else { 1.0 })
        .collect();
    let b_norm = norm(b);
    if b_norm == 0.0 {
        x.fill(0.0);
        return Ok(0);
    }
    let mut r = vec![0.0; n];
    a.spmv_into(x, &mut r);
    for (ri, bi) in r.iter_mut().zip(b) {
        *ri = bi - *ri;
    }
    let r_hat = r.clone();
    let (mut rho, mut alpha, mut omega) = (1.0, 1.0, 1.0);
    let mut v = vec![0.0; n];
    let mut p = vec![0.0; n];
    let mut y = vec![0.0; n];
    let mut z = vec![0.0; n];
    let mut s = vec![0.0; n];
    let mut t = vec![0.0; n];

    for iter in 1..=max_iter {
        let rho_new = dot(&r_hat, &r);
        if rho_new == 0.0 || omega == 0.0 {
            break;
        }
        let beta = (rho_new / rho) * (alpha / omega);
        rho = rho_new;
        for i in 0..n {
            p[i] = r[i] + beta * (p[i] - omega * v[i]);
            y[i] = p[i] * inv_diag[i];
        }
        a.spmv_into(&y, &mut v);
        alpha = rho / dot(&r_hat, &v);
        for i in 0..n {
            s[i] = r[i] - alpha * v[i];
        }
        if norm(&s) <= tol * b_norm {
            for i in 0..n {
                x[i] += alpha * y[i];
            }
            return Ok(iter);
        }
        for i in 0..n {
            z[i] = s[i] * inv_diag[i];
        }
        a.spmv_into(&z, &mut t);
        omega = dot(&t, &s) / dot(&t, &t);
        for i in 0..n {
            x[i] += alpha * y[i] + omega * z[i];
            r[i] = s[i] - omega * t[i];
        }
        if norm(&r) <= tol * b_norm {
            return Ok(iter);
        }
    }
    Err(Error::Solver {
        reason: format!("BiCGStab did not converge in {max_iter} iterations"),
        residual: norm(&r) / b_norm,
    })
}
