//! Lanczos iteration with full reorthogonalization for the lowest few
//! eigenpairs of a real symmetric operator.

use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct Eigenpairs {
    /// Ascending eigenvalues.
    pub values: Vec<f64>,
    /// Eigenvectors matching `values`.
    pub vectors: Vec<Vec<f64>>,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

fn normalize(v: &mut [f64]) -> f64 {
    let norm = dot(v, v).sqrt();
    if norm > 0.0 {
        v.iter_mut().for_each(|x| *x /= norm);
    }
    norm
}

/// Dense eigensolution of a symmetric matrix, ascending.
pub fn dense_lowest(matrix: DMatrix<f64>, count: usize) -> Eigenpairs {
    let eig = SymmetricEigen::new(matrix);
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    order.truncate(count);
    Eigenpairs {
        values: order.iter().map(|&i| eig.eigenvalues[i]).collect(),
        vectors: order.iter().map(|&i| eig.eigenvectors.column(i).iter().copied().collect()).collect(),
    }
}

/// Lowest `count` eigenvalues of a symmetric matrix with only the ground
/// eigenvector, found by shifted inverse iteration.
pub fn dense_ground(matrix: DMatrix<f64>, count: usize) -> Result<Eigenpairs> {
    let n = matrix.nrows();
    let mut values: Vec<f64> = matrix.clone().symmetric_eigenvalues().iter().copied().collect();
    values.sort_by(f64::total_cmp);
    values.truncate(count);
    let e0 = values[0];
    let shift = e0 - 1e-9 * e0.abs().max(1.0);
    let lu = (matrix - DMatrix::identity(n, n) * shift).lu();
    let mut v = nalgebra::DVector::from_fn(n, |i, _| 1.0 + (i % 7) as f64 * 0.1);
    for _ in 0..3 {
        v = lu.solve(&v).ok_or_else(|| Error::Internal("singular shifted matrix".into()))?;
        v /= v.norm();
    }
    Ok(Eigenpairs { values, vectors: vec![v.iter().copied().collect()] })
}

/// Lowest `count` eigenpairs of `op` on a space of dimension `dim`.
///
/// Converged when every wanted Ritz pair has residual below
/// `tolerance · max(1, |θ|)`.
pub fn lanczos_lowest<F>(op: F, dim: usize, count: usize, tolerance: f64, seed: u64) -> Result<Eigenpairs>
where
    F: Fn(&[f64], &mut [f64]),
{
    if dim == 0 {
        return Err(Error::Internal("empty operator".into()));
    }
    let count = count.min(dim);
    let max_iter = dim.min(600);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut q: Vec<f64> = (0..dim).map(|_| rng.gen::<f64>() - 0.5).collect();
    normalize(&mut q);

    let mut basis: Vec<Vec<f64>> = Vec::new();
    let mut alpha: Vec<f64> = Vec::new();
    let mut beta: Vec<f64> = Vec::new();
    let mut w = vec![0.0; dim];
    loop {
        op(&q, &mut w);
        let a = dot(&q, &w);
        axpy(-a, &q, &mut w);
        if let Some(prev) = basis.last() {
            axpy(-beta[beta.len() - 1], prev, &mut w);
        }
        basis.push(q.clone());
        alpha.push(a);
        for _ in 0..2 {
            for b in &basis {
                let c = dot(b, &w);
                axpy(-c, b, &mut w);
            }
        }
        let b_next = normalize(&mut w);
        let m = basis.len();
        let exhausted = m >= max_iter || b_next <= 1e-14 * alpha.iter().fold(1.0_f64, |s, x| s.max(x.abs()));
        if exhausted || (m >= count && m % 5 == 0) {
            let mut t = DMatrix::zeros(m, m);
            for i in 0..m {
                t[(i, i)] = alpha[i];
                if i + 1 < m {
                    t[(i, i + 1)] = beta[i];
                    t[(i + 1, i)] = beta[i];
                }
            }
            let ritz = dense_lowest(t, count);
            let converged = ritz.values.len() == count
                && ritz
                    .values
                    .iter()
                    .zip(&ritz.vectors)
                    .all(|(theta, s)| (b_next * s[m - 1]).abs() < tolerance * theta.abs().max(1.0));
            if converged || exhausted {
                if !converged && m < dim && b_next > 1e-14 {
                    return Err(Error::Internal(format!("Lanczos did not converge in {m} iterations")));
                }
                let vectors = ritz
                    .vectors
                    .iter()
                    .map(|s| {
                        let mut v = vec![0.0; dim];
                        for (c, b) in s.iter().zip(&basis) {
                            axpy(*c, b, &mut v);
                        }
                        normalize(&mut v);
                        v
                    })
                    .collect();
                return Ok(Eigenpairs { values: ritz.values, vectors });
            }
        }
        beta.push(b_next);
        std::mem::swap(&mut q, &mut w);
    }
}
