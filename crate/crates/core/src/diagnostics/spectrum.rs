//! Analytic Laplacian spectrum of the strip [0, L] x [0, 1] under Neumann
//! boundary conditions, compared against the discrete degree-weighted
//! eigenvectors on an isotropic grid discretization.
//!
//! Eigenfunctions are cos(i pi x1 / L) cos(j pi x2) with eigenvalues
//! (i pi / L)^2 + (j pi)^2. Whenever L > M (an integer), the first M
//! nontrivial eigenfunctions depend on x1 only, so an M-dimensional
//! embedding built from them collapses the second coordinate.

use std::f64::consts::PI;

use ndarray::Array1;
use serde::Serialize;

use crate::cloud::PointCloud;
use crate::error::{Error, Result};
use crate::neighborhood::NeighborhoodIndex;
use crate::solver::{assemble_quadratic, solve_degree_constrained};
use crate::weights::{lem_weights, Kernel};

#[derive(Clone, Copy, Debug, Serialize)]
pub struct StripMode {
    pub i: usize,
    pub j: usize,
    pub lambda: f64,
}

impl StripMode {
    /// True when the eigenfunction depends on the first variable only.
    pub fn x1_only(&self) -> bool {
        self.j == 0 && self.i > 0
    }
}

/// The first `count` nontrivial analytic eigenvalues, ascending (ties broken
/// by mode indices).
pub fn strip_eigenvalues(length: f64, count: usize) -> Result<Vec<StripMode>> {
    if !(length > 0.0) || !length.is_finite() {
        return Err(Error::InvalidParameter(
            "strip length must be positive and finite".into(),
        ));
    }
    let i_max = ((count as f64 + 2.0) * length.max(1.0)).ceil() as usize + 2;
    let j_max = count + 2;
    let mut modes = Vec::new();
    for i in 0..=i_max {
        for j in 0..=j_max {
            if i == 0 && j == 0 {
                continue;
            }
            let lambda = (i as f64 * PI / length).powi(2) + (j as f64 * PI).powi(2);
            modes.push(StripMode { i, j, lambda });
        }
    }
    modes.sort_by(|a, b| {
        a.lambda
            .partial_cmp(&b.lambda)
            .expect("finite eigenvalues")
            .then(a.i.cmp(&b.i))
            .then(a.j.cmp(&b.j))
    });
    modes.truncate(count);
    Ok(modes)
}

#[derive(Clone, Debug, Serialize)]
pub struct StripSpectrumReport {
    pub length: f64,
    pub analytic: Vec<StripMode>,
    pub x1_only: Vec<bool>,
    /// |cos| similarity between discrete eigenvector p and the analytic
    /// eigenfunction sampled on the grid nodes.
    pub cosine_similarity: Vec<f64>,
    pub grid_nodes: (usize, usize),
}

/// Compare the analytic spectrum with discrete degree-weighted eigenvectors
/// on an isotropic grid of `points_per_unit` nodes per unit length.
pub fn strip_spectrum_compare(
    length: f64,
    points_per_unit: usize,
    count: usize,
) -> Result<StripSpectrumReport> {
    if points_per_unit < 2 {
        return Err(Error::InvalidParameter(
            "need at least two points per unit length".into(),
        ));
    }
    if count == 0 {
        return Err(Error::InvalidParameter("count must be >= 1".into()));
    }
    let analytic = strip_eigenvalues(length, count)?;
    let nx = (length * points_per_unit as f64).round() as usize + 1;
    let ny = points_per_unit + 1;
    let hx = length / (nx - 1) as f64;
    let hy = 1.0 / (ny - 1) as f64;
    let n = nx * ny;
    let mut points = ndarray::Array2::zeros((n, 2));
    let mut row = 0;
    for a in 0..nx {
        for b in 0..ny {
            points[(row, 0)] = a as f64 * hx;
            points[(row, 1)] = b as f64 * hy;
            row += 1;
        }
    }
    let cloud = PointCloud::new(points)?;
    let radius = 1.1 * hx.max(hy);
    let index = NeighborhoodIndex::build_rball(&cloud, radius)?;
    let components = index.component_count();
    if components != 1 {
        return Err(Error::Disconnected { components });
    }
    let weights = lem_weights(&cloud, &index, Kernel::Window)?;
    let m = assemble_quadratic(&weights, n);
    let degrees = weights.degrees().expect("window weights carry degrees");
    let sol = solve_degree_constrained(&m.view(), degrees, count)?;
    let pts = cloud.points();
    let mut cosine = Vec::with_capacity(count);
    for (p, mode) in analytic.iter().enumerate() {
        let sampled: Array1<f64> = Array1::from_shape_fn(n, |r| {
            (mode.i as f64 * PI * pts[(r, 0)] / length).cos()
                * (mode.j as f64 * PI * pts[(r, 1)]).cos()
        });
        let v = sol.vectors.column(p);
        let dot: f64 = v.dot(&sampled);
        let nv = v.dot(&v).sqrt();
        let ns = sampled.dot(&sampled).sqrt();
        cosine.push((dot / (nv * ns)).abs());
    }
    Ok(StripSpectrumReport {
        length,
        x1_only: analytic.iter().map(StripMode::x1_only).collect(),
        analytic,
        cosine_similarity: cosine,
        grid_nodes: (nx, ny),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn long_strip_first_two_modes_are_x1_only() {
        let modes = strip_eigenvalues(3.0, 2).unwrap();
        assert_eq!((modes[0].i, modes[0].j), (1, 0));
        assert_eq!((modes[1].i, modes[1].j), (2, 0));
        assert!(modes.iter().all(StripMode::x1_only));
    }

    #[test]
    fn short_strip_second_mode_uses_x2() {
        let modes = strip_eigenvalues(1.5, 2).unwrap();
        assert_eq!((modes[0].i, modes[0].j), (1, 0));
        assert_eq!((modes[1].i, modes[1].j), (0, 1));
        assert!(!modes[1].x1_only());
    }

    #[test]
    fn x1_only_prefix_exactly_when_length_exceeds_two() {
        for &(l, expect) in &[(1.5, false), (1.9, false), (2.5, true), (3.0, true), (5.0, true)] {
            let modes = strip_eigenvalues(l, 2).unwrap();
            let both_x1 = modes.iter().all(StripMode::x1_only);
            assert_eq!(both_x1, expect, "L = {l}");
        }
    }

    #[test]
    fn discrete_eigenvectors_track_the_analytic_modes() {
        // Small resolution keeps this quick; the acceptance suite runs the
        // full 61 x 21 configuration.
        let report = strip_spectrum_compare(3.0, 10, 2).unwrap();
        assert_eq!(report.grid_nodes, (31, 11));
        for (p, cos) in report.cosine_similarity.iter().enumerate() {
            assert!(*cos > 0.95, "mode {p}: cosine {cos}");
        }
    }
}
