//! Small dense linear-algebra helpers shared by the solver and diagnostics.

use ndarray::{Array1, Array2, ArrayView1, ArrayView2, Axis};

use crate::error::{Error, Result};

/// Fix the sign of each column so its largest-magnitude entry is positive.
pub fn canonicalize_column_signs(mat: &mut Array2<f64>) {
    for mut col in mat.columns_mut() {
        let mut best = 0.0f64;
        let mut best_val = 0.0f64;
        for &v in col.iter() {
            if v.abs() > best {
                best = v.abs();
                best_val = v;
            }
        }
        if best_val < 0.0 {
            col.mapv_inplace(|v| -v);
        }
    }
}

/// Sample mean of each column.
pub fn column_means(mat: &ArrayView2<f64>) -> Array1<f64> {
    mat.mean_axis(Axis(0)).expect("non-empty matrix")
}

/// Sample covariance (1/N normalization) of the columns of `mat`.
pub fn covariance(mat: &ArrayView2<f64>) -> Array2<f64> {
    let n = mat.nrows() as f64;
    let means = column_means(mat);
    let centered = mat - &means.view().insert_axis(Axis(0));
    centered.t().dot(&centered) / n
}

/// Eigendecomposition of a symmetric 2x2 matrix, eigenvalues descending.
///
/// Closed form so that an exactly diagonal input returns its diagonal exactly
/// and the identity rotation.
pub fn symmetric_eigen_2x2(s: &ArrayView2<f64>) -> (Array1<f64>, Array2<f64>) {
    let a = s[(0, 0)];
    let b = 0.5 * (s[(0, 1)] + s[(1, 0)]);
    let c = s[(1, 1)];
    if b == 0.0 {
        return if a >= c {
            (Array1::from(vec![a, c]), Array2::eye(2))
        } else {
            (
                Array1::from(vec![c, a]),
                ndarray::array![[0.0, 1.0], [1.0, 0.0]],
            )
        };
    }
    let half_tr = 0.5 * (a + c);
    let half_diff = 0.5 * (a - c);
    let disc = (half_diff * half_diff + b * b).sqrt();
    let l1 = half_tr + disc;
    let l2 = half_tr - disc;
    // Eigenvector for l1: (b, l1 - a) or (l1 - c, b), pick the better-conditioned.
    let (vx, vy) = if half_diff >= 0.0 {
        (l1 - c, b)
    } else {
        (b, l1 - a)
    };
    let norm = (vx * vx + vy * vy).sqrt();
    let (ux, uy) = (vx / norm, vy / norm);
    let mut rot = ndarray::array![[ux, -uy], [uy, ux]];
    let vals = Array1::from(vec![l1, l2]);
    canonicalize_column_signs(&mut rot);
    (vals, rot)
}

/// Orthonormal basis of the hyperplane orthogonal to the all-ones vector
/// (Helmert-style), returned as a k x (k-1) matrix.
pub fn ones_complement_basis(k: usize) -> Array2<f64> {
    let mut b = Array2::zeros((k, k - 1));
    for j in 1..k {
        let scale = 1.0 / ((j * (j + 1)) as f64).sqrt();
        for i in 0..j {
            b[(i, j - 1)] = scale;
        }
        b[(j, j - 1)] = -(j as f64) * scale;
    }
    b
}

/// `inv_sqrt` of a symmetric positive definite matrix given by eigenpairs.
pub fn inv_sqrt_from_eigen(vals: &ArrayView1<f64>, vecs: &ArrayView2<f64>) -> Result<Array2<f64>> {
    let d = vals.len();
    let mut scaled = vecs.to_owned();
    for (j, mut col) in scaled.columns_mut().into_iter().enumerate() {
        let v = vals[j];
        if v <= 0.0 {
            return Err(Error::DegenerateCovariance(format!(
                "non-positive eigenvalue {v} in inverse square root"
            )));
        }
        col.mapv_inplace(|x| x / v.sqrt());
    }
    let mut out = Array2::zeros((d, d));
    ndarray::linalg::general_mat_mul(1.0, &scaled, &vecs.t(), 0.0, &mut out);
    Ok(out)
}

/// Frobenius norm.
pub fn frobenius_norm(mat: &ArrayView2<f64>) -> f64 {
    mat.iter().map(|v| v * v).sum::<f64>().sqrt()
}

/// Maximum absolute entry.
pub fn max_abs(mat: &ArrayView2<f64>) -> f64 {
    mat.iter().fold(0.0f64, |acc, v| acc.max(v.abs()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn eigen_2x2_diagonal_is_exact() {
        let s = ndarray::array![[4.0, 0.0], [0.0, 1.0]];
        let (vals, rot) = symmetric_eigen_2x2(&s.view());
        assert_eq!(vals[0], 4.0);
        assert_eq!(vals[1], 1.0);
        assert_eq!(rot, Array2::eye(2));
    }

    #[test]
    fn eigen_2x2_matches_definition() {
        let s = ndarray::array![[2.0, 0.7], [0.7, 1.0]];
        let (vals, rot) = symmetric_eigen_2x2(&s.view());
        let recon = rot.dot(&Array2::from_diag(&vals)).dot(&rot.t());
        for (a, b) in recon.iter().zip(s.iter()) {
            assert_abs_diff_eq!(a, b, epsilon = 1e-12);
        }
        assert!(vals[0] >= vals[1]);
    }

    #[test]
    fn ones_complement_is_orthonormal() {
        let b = ones_complement_basis(6);
        let gram = b.t().dot(&b);
        for i in 0..5 {
            for j in 0..5 {
                let expect = if i == j { 1.0 } else { 0.0 };
                assert_abs_diff_eq!(gram[(i, j)], expect, epsilon = 1e-12);
            }
        }
        let ones = Array1::from_elem(6, 1.0);
        let proj = b.t().dot(&ones);
        for v in proj.iter() {
            assert_abs_diff_eq!(*v, 0.0, epsilon = 1e-12);
        }
    }
}
