//! Fixed-size symmetric linear algebra for the three-mode fluctuation problem.

pub type Mat3 = [[f64; 3]; 3];

/// Eigen-decomposition of a real symmetric matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymEigen3 {
    /// Ascending eigenvalues.
    pub values: [f64; 3],
    /// Orthonormal eigenvectors stored as columns, matching `values`.
    pub vectors: Mat3,
}

pub fn mat_mul(a: &Mat3, b: &Mat3) -> Mat3 {
    let mut out = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            out[i][j] = (0..3).map(|k| a[i][k] * b[k][j]).sum();
        }
    }
    out
}

pub fn det3(a: &Mat3) -> f64 {
    a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
        + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0])
}

/// Cyclic Jacobi rotations until the off-diagonal part is below rounding.
///
/// Converges quadratically and is backward stable, so eigenvalues carry an
/// absolute error of a few ulps of the largest one.
pub fn sym_eigen3(a: &Mat3) -> SymEigen3 {
    let mut m = *a;
    let mut v = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
    for _sweep in 0..64 {
        let off = m[0][1].abs() + m[0][2].abs() + m[1][2].abs();
        if off == 0.0 {
            break;
        }
        for (p, q) in [(0, 1), (0, 2), (1, 2)] {
            let apq = m[p][q];
            if apq == 0.0 {
                continue;
            }
            let theta = (m[q][q] - m[p][p]) / (2.0 * apq);
            let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
            let t = if theta == 0.0 { 1.0 } else { t };
            let c = 1.0 / (t * t + 1.0).sqrt();
            let s = t * c;
            for k in 0..3 {
                let (mkp, mkq) = (m[k][p], m[k][q]);
                m[k][p] = c * mkp - s * mkq;
                m[k][q] = s * mkp + c * mkq;
            }
            for k in 0..3 {
                let (mpk, mqk) = (m[p][k], m[q][k]);
                m[p][k] = c * mpk - s * mqk;
                m[q][k] = s * mpk + c * mqk;
            }
            m[p][q] = 0.0;
            m[q][p] = 0.0;
            for row in v.iter_mut() {
                let (vp, vq) = (row[p], row[q]);
                row[p] = c * vp - s * vq;
                row[q] = s * vp + c * vq;
            }
        }
        let scale = m[0][0].abs() + m[1][1].abs() + m[2][2].abs();
        let off = m[0][1].abs() + m[0][2].abs() + m[1][2].abs();
        if off <= f64::EPSILON * 1e-3 * scale {
            break;
        }
    }
    let mut order = [0usize, 1, 2];
    order.sort_by(|&i, &j| m[i][i].total_cmp(&m[j][j]));
    let mut values = [0.0; 3];
    let mut vectors = [[0.0; 3]; 3];
    for (col, &src) in order.iter().enumerate() {
        values[col] = m[src][src];
        for row in 0..3 {
            vectors[row][col] = v[row][src];
        }
    }
    SymEigen3 { values, vectors }
}

/// `Σ f(λ_k) v_k v_kᵀ` for a decomposition.
pub fn spectral_map(eig: &SymEigen3, f: impl Fn(f64) -> f64) -> Mat3 {
    let fv = eig.values.map(f);
    let mut out = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            out[i][j] = (0..3).map(|k| fv[k] * eig.vectors[i][k] * eig.vectors[j][k]).sum();
        }
    }
    out
}
