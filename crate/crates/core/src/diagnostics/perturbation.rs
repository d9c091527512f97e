//! Perturbation stability of the cost comparison, the folded-variance
//! inequality, and the higher-dimensional collapse construction.

use ndarray::{Array2, ArrayView2};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::weights::{frobenius_constants, Algorithm, LocalWeightSet};

use super::{build_y, v_map_components, CanonicalLatent};

/// Outcome of the perturbation-bound check
/// Phi(Y + eps E) > (1 - 4 eps) Phi(Y) - 4 eps C_a S.
#[derive(Clone, Debug, Serialize)]
pub enum Lemma1Outcome {
    Passed {
        trials: usize,
        phi_y: f64,
    },
    /// The bound's LLE constant assumes non-negative weights; the check is
    /// skipped when any weight is negative.
    SkippedNegativeWeights {
        min_weight: f64,
    },
    Violated {
        trial: usize,
        phi_perturbed: f64,
        lower_bound: f64,
    },
}

impl Lemma1Outcome {
    pub fn passed(&self) -> bool {
        matches!(self, Lemma1Outcome::Passed { .. })
    }
}

/// Check the perturbation bound on `trials` random unit-Frobenius
/// perturbations of `y`.
pub fn lemma1_perturbation_check(
    y: &ArrayView2<f64>,
    weights: &LocalWeightSet,
    membership_max: usize,
    epsilon: f64,
    trials: usize,
    seed: u64,
) -> Result<Lemma1Outcome> {
    if !(epsilon > 0.0) || !epsilon.is_finite() {
        return Err(Error::InvalidParameter(
            "epsilon must be positive and finite".into(),
        ));
    }
    if weights.algorithm() == Algorithm::Lle {
        if let Some(min_weight) = weights.min_pair_weight() {
            if min_weight < 0.0 {
                return Ok(Lemma1Outcome::SkippedNegativeWeights { min_weight });
            }
        }
    }
    let d = weights.params.dim.unwrap_or(y.ncols());
    let (c_upper, _) = frobenius_constants(weights.algorithm(), weights.k_max(), d);
    let phi_y = weights.cost(y);
    let bound = (1.0 - 4.0 * epsilon) * phi_y - 4.0 * epsilon * c_upper * membership_max as f64;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (n, cols) = (y.nrows(), y.ncols());
    for trial in 0..trials {
        let mut e = Array2::from_shape_fn((n, cols), |_| {
            // Box-Muller pair, first component.
            let u1: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
            let u2: f64 = rng.gen_range(0.0..1.0);
            (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
        });
        let norm = e.iter().map(|v| v * v).sum::<f64>().sqrt();
        e.mapv_inplace(|v| v / norm);
        let perturbed = y + &(epsilon * &e);
        let phi_perturbed = weights.cost(&perturbed.view());
        if !(phi_perturbed > bound) {
            return Ok(Lemma1Outcome::Violated {
                trial,
                phi_perturbed,
                lower_bound: bound,
            });
        }
    }
    Ok(Lemma1Outcome::Passed {
        trials,
        phi_y,
    })
}

/// Var(|X|) / Var(X) of a sample.
pub fn var_abs_ratio(sample: &[f64]) -> f64 {
    let n = sample.len() as f64;
    let mean = sample.iter().sum::<f64>() / n;
    let var = sample.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
    let abs_mean = sample.iter().map(|v| v.abs()).sum::<f64>() / n;
    let abs_var = sample
        .iter()
        .map(|v| (v.abs() - abs_mean) * (v.abs() - abs_mean))
        .sum::<f64>()
        / n;
    abs_var / var
}

/// Folded-variance inequality for symmetric unimodal samples:
/// Var(|X|) >= Var(X)/4 - tolerance.
pub fn var_abs_check(sample: &[f64], tolerance: f64) -> bool {
    let n = sample.len() as f64;
    let mean = sample.iter().sum::<f64>() / n;
    let var = sample.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
    var_abs_ratio(sample) * var >= var / 4.0 - tolerance
}

/// The d-dimensional collapse embedding: the V map replaces the second
/// output column and the remaining columns are re-orthogonalized against it.
#[derive(Clone, Debug)]
pub struct HigherDimZ {
    pub z: Array2<f64>,
    pub kappa: f64,
    pub rho: f64,
    /// Correlations sigma_{2j} = Z^{(2)}' Y^{(j)} / N for j = 3..d.
    pub sigma_2j: Vec<f64>,
    pub sigma_max: f64,
}

pub fn higher_dim_z(canon: &CanonicalLatent) -> Result<HigherDimZ> {
    let d = canon.dim();
    if d < 3 {
        return Err(Error::InvalidParameter(
            "higher-dimensional collapse needs d >= 3".into(),
        ));
    }
    let n = canon.n();
    let y = build_y(canon);
    let x = canon.coords().column(0).to_owned();
    let (oriented, kappa, rho, z2, _) = v_map_components(&x.view())?;
    let mut z = Array2::zeros((n, d));
    for i in 0..n {
        z[(i, 0)] = oriented[i] / canon.sigma();
        z[(i, 1)] = z2[i];
    }
    let mut sigma_2j = Vec::with_capacity(d - 2);
    for j in 2..d {
        // Sample correlation: both columns are mean-zero with unit variance.
        let s: f64 = z2.dot(&y.column(j)) / n as f64;
        if s.abs() >= 1.0 - 1e-12 {
            return Err(Error::DegenerateCovariance(format!(
                "column {j} is collinear with the collapse column (sigma_2j = {s})"
            )));
        }
        let denom = (1.0 - s * s).sqrt();
        for i in 0..n {
            z[(i, j)] = (y[(i, j)] - s * z2[i]) / denom;
        }
        sigma_2j.push(s);
    }
    let sigma_max = sigma_2j.iter().fold(0.0f64, |acc, s| acc.max(s.abs()));
    Ok(HigherDimZ {
        z,
        kappa,
        rho,
        sigma_2j,
        sigma_max,
    })
}

/// The sufficient condition for Phi(Z) < Phi(Y) in d >= 3:
/// (1 + (d-3) s^2) / (1 - s^2) Phi(Z^{(2)})
///   < Phi(Y^{(2)}) + s^2 / (1 - s^2) sum_{j>=3} Phi(Y^{(j)}),
/// with s = sigma_max.
#[derive(Clone, Debug, Serialize)]
pub struct HigherDimCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub predicts_failure: bool,
    pub phi_y: f64,
    pub phi_z: f64,
}

pub fn higher_dim_sufficient_check(
    weights: &LocalWeightSet,
    canon: &CanonicalLatent,
    hz: &HigherDimZ,
) -> HigherDimCheck {
    let d = canon.dim();
    let y = build_y(canon);
    let s_sq = hz.sigma_max * hz.sigma_max;
    let phi_z2 = weights.column_cost(&hz.z.column(1));
    let phi_y2 = weights.column_cost(&y.column(1));
    let tail: f64 = (2..d).map(|j| weights.column_cost(&y.column(j))).sum();
    let lhs = (1.0 + (d as f64 - 3.0) * s_sq) / (1.0 - s_sq) * phi_z2;
    let rhs = phi_y2 + s_sq / (1.0 - s_sq) * tail;
    HigherDimCheck {
        lhs,
        rhs,
        predicts_failure: lhs < rhs,
        phi_y: weights.cost(&y.view()),
        phi_z: weights.cost(&hz.z.view()),
    }
}
