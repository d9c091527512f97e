//! Shared helpers for the integration and acceptance suites: random clouds,
//! feasible-candidate generators for the minimality checks, and small
//! constraint-residual utilities. Oracles live here, independent of the
//! library's solve path.

#![allow(dead_code)]

use manifold_core::PointCloud;
use ndarray::{Array1, Array2, ArrayView2, Axis};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_cloud(n: usize, d: usize, seed: u64) -> PointCloud {
    let mut r = rng(seed);
    PointCloud::new(Array2::from_shape_fn((n, d), |_| r.gen_range(-1.0..1.0))).unwrap()
}

pub fn standard_normal<R: Rng>(r: &mut R) -> f64 {
    let u1: f64 = r.gen_range(f64::MIN_POSITIVE..1.0);
    let u2: f64 = r.gen_range(0.0..1.0);
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

/// Symmetric 2x2 inverse square root (independent of the library path).
fn inv_sqrt_2x2(s: &Array2<f64>) -> Array2<f64> {
    let (a, b, c) = (s[(0, 0)], 0.5 * (s[(0, 1)] + s[(1, 0)]), s[(1, 1)]);
    let tr = a + c;
    let det = a * c - b * b;
    let disc = ((tr * tr / 4.0 - det).max(0.0)).sqrt();
    let (l1, l2) = (tr / 2.0 + disc, tr / 2.0 - disc);
    let (v1, v2) = if b.abs() > 1e-300 {
        let v1 = [l1 - c, b];
        let v2 = [l2 - c, b];
        (v1, v2)
    } else if a >= c {
        ([1.0, 0.0], [0.0, 1.0])
    } else {
        ([0.0, 1.0], [1.0, 0.0])
    };
    let n1 = (v1[0] * v1[0] + v1[1] * v1[1]).sqrt();
    let n2 = (v2[0] * v2[0] + v2[1] * v2[1]).sqrt();
    let u = [[v1[0] / n1, v2[0] / n2], [v1[1] / n1, v2[1] / n2]];
    let (s1, s2) = (1.0 / l1.sqrt(), 1.0 / l2.sqrt());
    let mut out = Array2::zeros((2, 2));
    for i in 0..2 {
        for j in 0..2 {
            out[(i, j)] = u[i][0] * s1 * u[j][0] + u[i][1] * s2 * u[j][1];
        }
    }
    out
}

/// Random matrix satisfying Cov = I, zero column sums (d = 2).
pub fn random_cov_feasible<R: Rng>(n: usize, r: &mut R) -> Array2<f64> {
    loop {
        let mut g = Array2::from_shape_fn((n, 2), |_| standard_normal(r));
        let means = g.mean_axis(Axis(0)).unwrap();
        for mut row in g.rows_mut() {
            row[0] -= means[0];
            row[1] -= means[1];
        }
        let cov = g.t().dot(&g) / n as f64;
        if cov[(0, 0)] <= 1e-12 || cov[(1, 1)] <= 1e-12 {
            continue;
        }
        return g.dot(&inv_sqrt_2x2(&cov));
    }
}

/// Random matrix satisfying Y'DY = I, Y'D1 = 0 (d = 2).
pub fn random_degree_feasible<R: Rng>(n: usize, degrees: &[f64], r: &mut R) -> Array2<f64> {
    let wsum: f64 = degrees.iter().sum();
    loop {
        let mut g = Array2::from_shape_fn((n, 2), |_| standard_normal(r));
        for c in 0..2 {
            let wmean: f64 = (0..n).map(|i| degrees[i] * g[(i, c)]).sum::<f64>() / wsum;
            for i in 0..n {
                g[(i, c)] -= wmean;
            }
        }
        let mut gram = Array2::<f64>::zeros((2, 2));
        for i in 0..n {
            for a in 0..2 {
                for b in 0..2 {
                    gram[(a, b)] += degrees[i] * g[(i, a)] * g[(i, b)];
                }
            }
        }
        if gram[(0, 0)] <= 1e-12 || gram[(1, 1)] <= 1e-12 {
            continue;
        }
        return g.dot(&inv_sqrt_2x2(&gram));
    }
}

/// ||Cov(Y) - I||_max and max |column sum|.
pub fn cov_constraint_residuals(y: &ArrayView2<f64>) -> (f64, f64) {
    let n = y.nrows() as f64;
    let d = y.ncols();
    let means = y.mean_axis(Axis(0)).unwrap();
    let centered = y - &means.view().insert_axis(Axis(0));
    let cov = centered.t().dot(&centered) / n;
    let mut cov_resid = 0.0f64;
    for a in 0..d {
        for b in 0..d {
            let expect = if a == b { 1.0 } else { 0.0 };
            cov_resid = cov_resid.max((cov[(a, b)] - expect).abs());
        }
    }
    let sums: Array1<f64> = y.sum_axis(Axis(0));
    let mean_resid = sums.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
    (cov_resid, mean_resid)
}

pub fn degree_constraint_residuals(y: &ArrayView2<f64>, degrees: &[f64]) -> (f64, f64) {
    let n = y.nrows();
    let d = y.ncols();
    let mut gram = Array2::<f64>::zeros((d, d));
    let mut dsum = vec![0.0f64; d];
    for i in 0..n {
        for a in 0..d {
            dsum[a] += degrees[i] * y[(i, a)];
            for b in 0..d {
                gram[(a, b)] += degrees[i] * y[(i, a)] * y[(i, b)];
            }
        }
    }
    let mut gram_resid = 0.0f64;
    for a in 0..d {
        for b in 0..d {
            let expect = if a == b { 1.0 } else { 0.0 };
            gram_resid = gram_resid.max((gram[(a, b)] - expect).abs());
        }
    }
    let mean_resid = dsum.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
    (gram_resid, mean_resid)
}
