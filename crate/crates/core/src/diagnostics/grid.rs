//! Closed-form grid quantities in exact rational arithmetic, the inner-point
//! cost comparison on grids, and the continuous r-ball estimates of the
//! stencil constant F.
//!
//! On the lattice [-m, m] x [-q, q]:
//!   sigma^2 = m(m+1)/3,  tau^2 = q(q+1)/3,
//!   rho^2 = 4m(m+1)/3 - 4m^2(m+1)^2 / (2m+1)^2   (slope-2 convention),
//! and the inner-point costs are
//!   phi(Y_ij) = F(K) (1/sigma^2 + 1/tau^2),
//!   phi(Z_ij) = F(K) (1/sigma^2 + 4/rho^2),
//! with F(4) = 2, F(8) = 6, F(12) = 14 (and F = sum of squared x-offsets for
//! a general r-ball stencil).

use std::f64::consts::PI;

use num_rational::Ratio;
use serde::Serialize;

use crate::error::{Error, Result};

pub type GridRatio = Ratio<i128>;

fn rat(n: i128, d: i128) -> GridRatio {
    Ratio::new(n, d)
}

/// sigma^2 = m(m+1)/3, exactly.
pub fn grid_sigma_sq(m: u32) -> GridRatio {
    let m = m as i128;
    rat(m * (m + 1), 3)
}

/// tau^2 = q(q+1)/3, exactly.
pub fn grid_tau_sq(q: u32) -> GridRatio {
    grid_sigma_sq(q)
}

/// rho^2 = 4m(m+1)/3 - 4m^2(m+1)^2/(2m+1)^2, exactly (slope-2 convention).
pub fn grid_rho_sq(m: u32) -> GridRatio {
    let m = m as i128;
    let a = rat(4 * m * (m + 1), 3);
    let b = rat(4 * m * m * (m + 1) * (m + 1), (2 * m + 1) * (2 * m + 1));
    a - b
}

/// The stencil constant F(K) for K-nearest neighborhoods on the lattice.
pub fn f_constant(k: usize) -> Result<i128> {
    match k {
        4 => Ok(2),
        8 => Ok(6),
        12 => Ok(14),
        other => Err(Error::InvalidParameter(format!(
            "closed-form F is defined for K in {{4, 8, 12}}, got {other}"
        ))),
    }
}

/// Neighborhood choice for the grid cost comparison.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum GridNeighborhood {
    Knn(usize),
    RBall(f64),
}

/// Lattice offsets of an inner-point neighborhood.
fn stencil(neighborhood: GridNeighborhood) -> Result<Vec<(i64, i64)>> {
    match neighborhood {
        GridNeighborhood::Knn(k) => {
            f_constant(k)?;
            let mut offsets = vec![(1i64, 0i64), (-1, 0), (0, 1), (0, -1)];
            if k >= 8 {
                offsets.extend_from_slice(&[(1, 1), (1, -1), (-1, 1), (-1, -1)]);
            }
            if k >= 12 {
                offsets.extend_from_slice(&[(2, 0), (-2, 0), (0, 2), (0, -2)]);
            }
            Ok(offsets)
        }
        GridNeighborhood::RBall(r) => {
            if !(1.0..=3.0).contains(&r) {
                return Err(Error::InvalidParameter(format!(
                    "grid r-ball analysis covers 1 <= r <= 3, got {r}"
                )));
            }
            let bound = r.floor() as i64;
            let r_sq = r * r;
            let mut offsets = Vec::new();
            for dx in -bound..=bound {
                for dy in -bound..=bound {
                    if (dx, dy) != (0, 0) && ((dx * dx + dy * dy) as f64) <= r_sq {
                        offsets.push((dx, dy));
                    }
                }
            }
            Ok(offsets)
        }
    }
}

/// Sum of squared x-offsets over the stencil; equals F(K) for K = 4, 8, 12.
pub fn stencil_f(neighborhood: GridNeighborhood) -> Result<i128> {
    Ok(stencil(neighborhood)?
        .iter()
        .map(|&(dx, _)| (dx as i128) * (dx as i128))
        .sum())
}

#[derive(Clone, Debug, Serialize)]
pub struct GridBruteForce {
    /// The inner lattice point used for the brute-force sums.
    pub inner_point: (i64, i64),
    pub phi_y: f64,
    pub phi_z: f64,
    pub agrees: bool,
}

/// The inner-point cost comparison on the grid [-m, m] x [-q, q].
#[derive(Clone, Debug, Serialize)]
pub struct GridTheorem1Report {
    pub m: u32,
    pub q: u32,
    pub f: f64,
    pub sigma_sq: f64,
    pub tau_sq: f64,
    pub rho_sq: f64,
    pub phi_y: f64,
    pub phi_z: f64,
    /// True when phi(Y_ij) > phi(Z_ij): the collapsed embedding is cheaper.
    pub verdict: bool,
    /// Brute-force recomputation on an actual inner neighborhood; `None`
    /// when the grid is too small to hold an eligible inner point.
    pub brute_force: Option<GridBruteForce>,
}

/// Evaluate phi(Y_ij) and phi(Z_ij) in closed form and cross-check both by
/// brute-force summation over an actual inner-point neighborhood (exact
/// rational arithmetic throughout).
pub fn grid_theorem1_check(
    m: u32,
    q: u32,
    neighborhood: GridNeighborhood,
) -> Result<GridTheorem1Report> {
    if q == 0 || m < q {
        return Err(Error::InvalidParameter(
            "grid requires m >= q >= 1".into(),
        ));
    }
    let offsets = stencil(neighborhood)?;
    let sigma_sq = grid_sigma_sq(m);
    let tau_sq = grid_tau_sq(q);
    let rho_sq = grid_rho_sq(m);
    let f: i128 = offsets.iter().map(|&(dx, _)| (dx as i128) * (dx as i128)).sum();
    let f_rat = GridRatio::from_integer(f);
    let phi_y = f_rat * (sigma_sq.recip() + tau_sq.recip());
    let phi_z = f_rat * (sigma_sq.recip() + rat(4, 1) / rho_sq);
    let verdict = phi_y > phi_z;

    let brute_force = brute_force_inner_point(m, q, neighborhood, &offsets, phi_y, phi_z)?;

    Ok(GridTheorem1Report {
        m,
        q,
        f: f as f64,
        sigma_sq: ratio_to_f64(sigma_sq),
        tau_sq: ratio_to_f64(tau_sq),
        rho_sq: ratio_to_f64(rho_sq),
        phi_y: ratio_to_f64(phi_y),
        phi_z: ratio_to_f64(phi_z),
        verdict,
        brute_force,
    })
}

fn ratio_to_f64(r: GridRatio) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// Brute-force phi values at an actual inner point whose neighborhood is
/// found by sorting lattice distances with the same tie rule as the real
/// neighbor search (squared distance, then cloud row index).
fn brute_force_inner_point(
    m: u32,
    q: u32,
    neighborhood: GridNeighborhood,
    offsets: &[(i64, i64)],
    phi_y_closed: GridRatio,
    phi_z_closed: GridRatio,
) -> Result<Option<GridBruteForce>> {
    let (mi, qi) = (m as i64, q as i64);
    let reach_x = offsets.iter().map(|&(dx, _)| dx.abs()).max().unwrap_or(1);
    let reach_y = offsets.iter().map(|&(_, dy)| dy.abs()).max().unwrap_or(1);
    let reach = reach_x.max(reach_y);
    // Need an inner point (neighbors all in bounds) whose first coordinate
    // keeps the whole neighborhood on the non-negative branch of the V map.
    let ci = reach_x;
    let cj = 0i64;
    if ci + reach_x > mi || reach_y > qi {
        return Ok(None);
    }
    // Candidate window around the center; anything outside is farther than
    // every stencil member.
    let win = reach + 2;
    let mut candidates: Vec<(i128, i64, i64, i64)> = Vec::new(); // (dist_sq, row_index, i, j)
    for i in (ci - win).max(-mi)..=(ci + win).min(mi) {
        for j in (cj - win).max(-qi)..=(cj + win).min(qi) {
            if (i, j) == (ci, cj) {
                continue;
            }
            let d_sq = ((i - ci) * (i - ci) + (j - cj) * (j - cj)) as i128;
            let row = (i + mi) * (2 * qi + 1) + (j + qi);
            candidates.push((d_sq, row, i, j));
        }
    }
    candidates.sort();
    let selected: Vec<(i64, i64)> = match neighborhood {
        GridNeighborhood::Knn(k) => candidates.iter().take(k).map(|&(_, _, i, j)| (i, j)).collect(),
        GridNeighborhood::RBall(r) => {
            let r_sq = r * r;
            candidates
                .iter()
                .filter(|&&(d_sq, _, _, _)| (d_sq as f64) <= r_sq)
                .map(|&(_, _, i, j)| (i, j))
                .collect()
        }
    };
    let sigma_sq = grid_sigma_sq(m);
    let tau_sq = grid_tau_sq(q);
    let rho_sq = grid_rho_sq(m);
    let mut phi_y = rat(0, 1);
    let mut phi_z = rat(0, 1);
    for &(i, j) in &selected {
        let di = (i - ci) as i128;
        let dj = (j - cj) as i128;
        phi_y = phi_y + GridRatio::from_integer(di * di) / sigma_sq
            + GridRatio::from_integer(dj * dj) / tau_sq;
        // Z columns: (i/sigma, 2|i|/rho - zbar); only differences enter.
        let dabs = (i.unsigned_abs() as i128) - (ci.unsigned_abs() as i128);
        phi_z = phi_z + GridRatio::from_integer(di * di) / sigma_sq
            + GridRatio::from_integer(4 * dabs * dabs) / rho_sq;
    }
    let agrees = phi_y == phi_y_closed && phi_z == phi_z_closed;
    Ok(Some(GridBruteForce {
        inner_point: (ci, cj),
        phi_y: ratio_to_f64(phi_y),
        phi_z: ratio_to_f64(phi_z),
        agrees,
    }))
}

/// The r-ball integral estimate of F: pi r^4 / 4.
pub fn continuous_fk(r: f64) -> f64 {
    PI * r.powi(4) / 4.0
}

/// Kernel-weighted variant: pi * integral_0^r k(t^2) t^3 dt (Simpson rule).
pub fn continuous_fk_weighted<F: Fn(f64) -> f64>(r: f64, kernel: F) -> f64 {
    let n = 4096;
    let h = r / n as f64;
    let f = |t: f64| kernel(t * t) * t * t * t;
    let mut acc = f(0.0) + f(r);
    for step in 1..n {
        let w = if step % 2 == 1 { 4.0 } else { 2.0 };
        acc += w * f(step as f64 * h);
    }
    PI * acc * h / 3.0
}

/// Continuous estimates of the inner-point costs for an r-ball neighborhood.
pub fn continuous_phi_y_estimate(r: f64, sigma_sq: f64, tau_sq: f64) -> f64 {
    continuous_fk(r) * (1.0 / sigma_sq + 1.0 / tau_sq)
}

pub fn continuous_phi_z_estimate(r: f64, sigma_sq: f64, rho_sq: f64) -> f64 {
    continuous_fk(r) * (1.0 / sigma_sq + 4.0 / rho_sq)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn closed_forms_at_small_m() {
        assert_eq!(grid_sigma_sq(1), rat(2, 3));
        assert_eq!(grid_rho_sq(1), rat(8, 9));
        assert_eq!(grid_sigma_sq(40), rat(40 * 41, 3));
    }

    #[test]
    fn rho_exceeds_sigma_for_every_grid() {
        for m in 1..=100 {
            assert!(grid_rho_sq(m) > grid_sigma_sq(m), "m = {m}");
        }
    }

    #[test]
    fn f_constants() {
        assert_eq!(f_constant(4).unwrap(), 2);
        assert_eq!(f_constant(8).unwrap(), 6);
        assert_eq!(f_constant(12).unwrap(), 14);
        assert!(f_constant(6).is_err());
        for (k, expect) in [(4usize, 2i128), (8, 6), (12, 14)] {
            assert_eq!(stencil_f(GridNeighborhood::Knn(k)).unwrap(), expect);
        }
        // r-ball stencils reproduce the same constants on the shells.
        assert_eq!(stencil_f(GridNeighborhood::RBall(1.0)).unwrap(), 2);
        assert_eq!(stencil_f(GridNeighborhood::RBall(1.5)).unwrap(), 6);
        assert_eq!(stencil_f(GridNeighborhood::RBall(2.0)).unwrap(), 14);
    }

    #[test]
    fn elongated_grid_prefers_the_collapse() {
        let report = grid_theorem1_check(41, 20, GridNeighborhood::Knn(8)).unwrap();
        assert!(report.verdict);
        let brute = report.brute_force.unwrap();
        assert!(brute.agrees);
    }

    #[test]
    fn square_grid_does_not() {
        for m in [1u32, 5, 40, 100] {
            let report = grid_theorem1_check(m, m, GridNeighborhood::Knn(8)).unwrap();
            assert!(!report.verdict, "m = {m}");
        }
    }

    #[test]
    fn brute_force_agrees_for_all_supported_neighborhoods() {
        for nb in [
            GridNeighborhood::Knn(4),
            GridNeighborhood::Knn(8),
            GridNeighborhood::Knn(12),
            GridNeighborhood::RBall(1.0),
            GridNeighborhood::RBall(2.5),
            GridNeighborhood::RBall(3.0),
        ] {
            let report = grid_theorem1_check(40, 20, nb).unwrap();
            let brute = report.brute_force.expect("inner point exists");
            assert!(brute.agrees, "{nb:?}");
        }
    }

    #[test]
    fn continuous_estimates() {
        assert_abs_diff_eq!(continuous_fk(1.0), PI / 4.0, epsilon = 1e-15);
        // Constant kernel reduces to the plain estimate.
        assert_abs_diff_eq!(
            continuous_fk_weighted(1.7, |_| 1.0),
            continuous_fk(1.7),
            epsilon = 1e-9
        );
        // The Y/Z estimate ratio is independent of r.
        let (s2, t2, r2) = (10.0, 3.0, 14.0);
        let ratio_a =
            continuous_phi_y_estimate(1.0, s2, t2) / continuous_phi_z_estimate(1.0, s2, r2);
        let ratio_b =
            continuous_phi_y_estimate(2.9, s2, t2) / continuous_phi_z_estimate(2.9, s2, r2);
        assert_abs_diff_eq!(ratio_a, ratio_b, epsilon = 1e-12);
    }
}
