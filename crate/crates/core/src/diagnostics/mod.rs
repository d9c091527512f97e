//! Collapse diagnostics: reference embeddings, their low-cost piecewise-linear
//! competitors, per-column error decompositions, and the necessary-condition
//! checks that predict when a normalized-output algorithm prefers the
//! collapsed embedding.
//!
//! Conventions. The canonical latent sample is centered and rotated to
//! principal axes with descending standard deviations sigma >= tau. The
//! collapse embedding Z maps the first latent coordinate through a V shape;
//! its scale constant `rho` is reported in the slope-2 convention used by the
//! closed-form grid analysis (so rho > sigma holds on every grid and
//! rho^2 = 4m(m+1)/3 - 4m^2(m+1)^2/(2m+1)^2 exactly). The V map itself has
//! Lipschitz constant 2*kappa/rho, which is the factor entering the
//! failure-condition checks.

pub mod grid;
pub mod perturbation;
pub mod spectrum;

use ndarray::{Array1, Array2, ArrayView1, ArrayView2, Axis};
use ndarray_linalg::{Eigh, LeastSquaresSvd, UPLO};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{canonicalize_column_signs, symmetric_eigen_2x2};
use crate::neighborhood::{NeighborhoodIndex, NeighborhoodMode};
use crate::solver::EmbedConfig;
use crate::weights::{frobenius_constants, Algorithm, LocalWeightSet};
use crate::PointCloud;

/// A latent sample centered and rotated to principal axes.
#[derive(Clone, Debug)]
pub struct CanonicalLatent {
    coords: Array2<f64>,
    variances: Vec<f64>,
    sigmas: Vec<f64>,
    rotation: Array2<f64>,
    mean: Array1<f64>,
}

impl CanonicalLatent {
    pub fn coords(&self) -> ArrayView2<'_, f64> {
        self.coords.view()
    }

    pub fn n(&self) -> usize {
        self.coords.nrows()
    }

    pub fn dim(&self) -> usize {
        self.coords.ncols()
    }

    /// Principal variances, descending (the diagonal of Sigma).
    pub fn variances(&self) -> &[f64] {
        &self.variances
    }

    /// Principal standard deviations, descending.
    pub fn sigmas(&self) -> &[f64] {
        &self.sigmas
    }

    pub fn sigma(&self) -> f64 {
        self.sigmas[0]
    }

    pub fn tau(&self) -> f64 {
        self.sigmas[1]
    }

    pub fn sigma_sq(&self) -> f64 {
        self.variances[0]
    }

    pub fn tau_sq(&self) -> f64 {
        self.variances[1]
    }

    /// Aspect ratio c = sigma / tau.
    pub fn aspect(&self) -> f64 {
        self.sigma() / self.tau()
    }

    pub fn rotation(&self) -> ArrayView2<'_, f64> {
        self.rotation.view()
    }

    pub fn mean(&self) -> ArrayView1<'_, f64> {
        self.mean.view()
    }
}

/// Center the latent sample and rotate it so the covariance is diagonal with
/// descending entries.
pub fn canonicalize_latent(latent: &ArrayView2<f64>) -> Result<CanonicalLatent> {
    let n = latent.nrows();
    let d = latent.ncols();
    if n < 2 || d < 1 {
        return Err(Error::InvalidParameter(
            "canonicalization needs at least two points and one dimension".into(),
        ));
    }
    let mean = latent.mean_axis(Axis(0)).expect("non-empty");
    let centered = latent - &mean.view().insert_axis(Axis(0));
    let cov = centered.t().dot(&centered) / n as f64;
    let (variances, rotation) = if d == 2 {
        symmetric_eigen_2x2(&cov.view())
    } else {
        let (vals, vecs) = cov
            .eigh(UPLO::Lower)
            .map_err(|e| Error::Eigensolver(e.to_string()))?;
        // LAPACK returns ascending order; flip to descending.
        let mut sorted_vals = Array1::zeros(d);
        let mut sorted_vecs = Array2::zeros((d, d));
        for (slot, src) in (0..d).rev().enumerate() {
            sorted_vals[slot] = vals[src];
            sorted_vecs.column_mut(slot).assign(&vecs.column(src));
        }
        canonicalize_column_signs(&mut sorted_vecs);
        (sorted_vals, sorted_vecs)
    };
    let smallest = variances[d - 1];
    if !(smallest > 0.0) || smallest < 1e-30 * variances[0].max(1.0) {
        return Err(Error::DegenerateCovariance(format!(
            "smallest principal variance is {smallest}"
        )));
    }
    let coords = centered.dot(&rotation);
    Ok(CanonicalLatent {
        coords,
        sigmas: variances.iter().map(|v| v.sqrt()).collect(),
        variances: variances.to_vec(),
        rotation,
        mean,
    })
}

/// The reference embedding Y = X Sigma^{-1/2}: the canonical latent whitened
/// to Cov(Y) = I, Y'1 = 0.
pub fn build_y(canon: &CanonicalLatent) -> Array2<f64> {
    let mut y = canon.coords.clone();
    for (j, mut col) in y.columns_mut().into_iter().enumerate() {
        let s = canon.sigmas[j];
        col.mapv_inplace(|v| v / s);
    }
    y
}

/// The collapse embedding and the constants defining it.
#[derive(Clone, Debug)]
pub struct CollapseEmbedding {
    pub z: Array2<f64>,
    /// Slope-balance constant; orientation is fixed so kappa >= 1.
    pub kappa: f64,
    /// Scale constant in the slope-2 convention.
    pub rho: f64,
    /// True when the first axis was reflected to enforce kappa >= 1.
    pub reflected: bool,
}

impl CollapseEmbedding {
    /// Squared Lipschitz constant of the V map, the factor appearing in the
    /// failure conditions.
    pub fn v_slope_sq(&self) -> f64 {
        let s = 2.0 * self.kappa / self.rho;
        s * s
    }
}

pub(crate) fn v_map_components(
    x: &ArrayView1<f64>,
) -> Result<(Array1<f64>, f64, f64, Array1<f64>, bool)> {
    let n = x.len() as f64;
    let mut a_neg = 0.0;
    let mut a_pos = 0.0;
    for &v in x.iter() {
        if v < 0.0 {
            a_neg += v * v;
        } else {
            a_pos += v * v;
        }
    }
    if !(a_neg > 0.0) || !(a_pos > 0.0) {
        return Err(Error::InvalidParameter(
            "collapse embedding needs first-coordinate values on both sides of zero".into(),
        ));
    }
    // Orient so kappa = sum_{x<0} x^2 / sum_{x>=0} x^2 >= 1; this ratio makes
    // Cov(Z1, Z2) vanish identically.
    let reflected = a_neg < a_pos;
    let oriented: Array1<f64> = if reflected { x.mapv(|v| -v) } else { x.to_owned() };
    let (a_neg, a_pos) = if reflected { (a_pos, a_neg) } else { (a_neg, a_pos) };
    let kappa = a_neg / a_pos;
    let s: Array1<f64> = oriented.mapv(|v| if v >= 0.0 { 2.0 * kappa * v } else { -2.0 * v });
    let mean_s = s.sum() / n;
    let var_s = s.iter().map(|v| (v - mean_s) * (v - mean_s)).sum::<f64>() / n;
    let rho = var_s.sqrt();
    if !(rho > 0.0) {
        return Err(Error::DegenerateCovariance(
            "collapse column has zero variance".into(),
        ));
    }
    let z2 = s.mapv(|v| (v - mean_s) / rho);
    Ok((oriented, kappa, rho, z2, reflected))
}

/// The collapse embedding Z: first column the (possibly reflected) normalized
/// first latent coordinate, second column its V-shaped image, normalized so
/// Cov(Z) = I and Z'1 = 0.
pub fn build_z(canon: &CanonicalLatent) -> Result<CollapseEmbedding> {
    if canon.dim() < 2 {
        return Err(Error::InvalidParameter(
            "collapse embedding needs a two-dimensional latent".into(),
        ));
    }
    let x = canon.coords.column(0);
    let (oriented, kappa, rho, z2, reflected) = v_map_components(&x)?;
    let sigma = canon.sigma();
    let mut z = Array2::zeros((canon.n(), 2));
    for (i, &v) in oriented.iter().enumerate() {
        z[(i, 0)] = v / sigma;
        z[(i, 1)] = z2[i];
    }
    Ok(CollapseEmbedding {
        z,
        kappa,
        rho,
        reflected,
    })
}

/// The latent sample normalized against the degree matrix: the only affine
/// image of X (up to rotation) with Y'DY = I and Y'D1 = 0.
#[derive(Clone, Debug)]
pub struct DegreeNormalizedLatent {
    pub y_hat: Array2<f64>,
    pub sigma_hat: f64,
    pub tau_hat: f64,
    /// The D-centered, rotated coordinates before whitening.
    pub x_hat: Array2<f64>,
}

pub fn build_y_hat(latent: &ArrayView2<f64>, degrees: &[f64]) -> Result<DegreeNormalizedLatent> {
    let n = latent.nrows();
    let d = latent.ncols();
    if d != 2 {
        return Err(Error::InvalidParameter(
            "degree-normalized embedding is defined for two-dimensional latents".into(),
        ));
    }
    if degrees.len() != n {
        return Err(Error::InvalidParameter(
            "degree vector length does not match latent".into(),
        ));
    }
    let wsum: f64 = degrees.iter().sum();
    let mut wmean = [0.0f64; 2];
    for (i, &w) in degrees.iter().enumerate() {
        wmean[0] += w * latent[(i, 0)];
        wmean[1] += w * latent[(i, 1)];
    }
    wmean[0] /= wsum;
    wmean[1] /= wsum;
    let mut tilde = latent.to_owned();
    for mut row in tilde.rows_mut() {
        row[0] -= wmean[0];
        row[1] -= wmean[1];
    }
    // S = X~' D X~.
    let mut s = Array2::<f64>::zeros((2, 2));
    for (i, &w) in degrees.iter().enumerate() {
        for a in 0..2 {
            for b in 0..2 {
                s[(a, b)] += w * tilde[(i, a)] * tilde[(i, b)];
            }
        }
    }
    let (vals, gamma) = symmetric_eigen_2x2(&s.view());
    if !(vals[1] > 0.0) {
        return Err(Error::DegenerateCovariance(
            "degree-weighted scatter is singular".into(),
        ));
    }
    let x_hat = tilde.dot(&gamma);
    let sigma_hat = vals[0].sqrt();
    let tau_hat = vals[1].sqrt();
    let mut y_hat = x_hat.clone();
    for (i, mut col) in y_hat.columns_mut().into_iter().enumerate() {
        let s = if i == 0 { sigma_hat } else { tau_hat };
        col.mapv_inplace(|v| v / s);
    }
    Ok(DegreeNormalizedLatent {
        y_hat,
        sigma_hat,
        tau_hat,
        x_hat,
    })
}

/// Degree-weighted collapse embedding satisfying Z'DZ = I, Z'D1 = 0.
#[derive(Clone, Debug)]
pub struct DegreeCollapseEmbedding {
    pub z_hat: Array2<f64>,
    pub kappa_hat: f64,
    pub rho_hat: f64,
}

pub fn build_z_hat(latent: &ArrayView2<f64>, degrees: &[f64]) -> Result<DegreeCollapseEmbedding> {
    let hat = build_y_hat(latent, degrees)?;
    let x = hat.x_hat.column(0);
    let n = x.len();
    let mut a_neg = 0.0;
    let mut a_pos = 0.0;
    for (i, &v) in x.iter().enumerate() {
        let w = degrees[i];
        if v < 0.0 {
            a_neg += w * v * v;
        } else {
            a_pos += w * v * v;
        }
    }
    if !(a_neg > 0.0) || !(a_pos > 0.0) {
        return Err(Error::InvalidParameter(
            "collapse embedding needs first-coordinate values on both sides of zero".into(),
        ));
    }
    let reflected = a_neg < a_pos;
    let oriented: Array1<f64> = if reflected { x.mapv(|v| -v) } else { x.to_owned() };
    let (a_neg, a_pos) = if reflected { (a_pos, a_neg) } else { (a_neg, a_pos) };
    let kappa_hat = a_neg / a_pos;
    let s: Array1<f64> = oriented.mapv(|v| if v >= 0.0 { 2.0 * kappa_hat * v } else { -2.0 * v });
    let wsum: f64 = degrees.iter().sum();
    let mean: f64 = s
        .iter()
        .zip(degrees.iter())
        .map(|(&sv, &w)| w * sv)
        .sum::<f64>()
        / wsum;
    let rho_sq: f64 = s
        .iter()
        .zip(degrees.iter())
        .map(|(&sv, &w)| w * (sv - mean) * (sv - mean))
        .sum();
    let rho_hat = rho_sq.sqrt();
    if !(rho_hat > 0.0) {
        return Err(Error::DegenerateCovariance(
            "degree-weighted collapse column has zero variance".into(),
        ));
    }
    let mut z_hat = Array2::zeros((n, 2));
    for i in 0..n {
        z_hat[(i, 0)] = oriented[i] / hat.sigma_hat;
        z_hat[(i, 1)] = (s[i] - mean) / rho_hat;
    }
    Ok(DegreeCollapseEmbedding {
        z_hat,
        kappa_hat,
        rho_hat,
    })
}

/// Per-point, per-column errors e_i^{(j)} = ||W_i X_i^{(j)}||^2 and their means.
#[derive(Clone, Debug)]
pub struct ColumnErrors {
    pub per_point: Array2<f64>,
    pub means: Vec<f64>,
}

pub fn column_errors(weights: &LocalWeightSet, coords: &ArrayView2<f64>) -> ColumnErrors {
    let n = weights.n();
    let d = coords.ncols();
    let mut per_point = Array2::zeros((n, d));
    for i in 0..n {
        let nbrs = weights.neighbors(i);
        let mut xi = Array2::zeros((nbrs.len() + 1, d));
        xi.row_mut(0).assign(&coords.row(i));
        for (slot, &j) in nbrs.iter().enumerate() {
            xi.row_mut(slot + 1).assign(&coords.row(j));
        }
        let prod = weights.block(i).dot(&xi);
        for c in 0..d {
            per_point[(i, c)] = prod.column(c).iter().map(|v| v * v).sum();
        }
    }
    let means = (0..d)
        .map(|c| per_point.column(c).sum() / n as f64)
        .collect();
    ColumnErrors { per_point, means }
}

/// Neighborhoods whose first-coordinate values straddle zero (closed
/// straddle: min <= 0 <= max), and the largest radius among them.
pub fn n0_and_rmax(index: &NeighborhoodIndex, coords: &ArrayView2<f64>) -> (Vec<usize>, f64) {
    let mut n0 = Vec::new();
    let mut r_max: f64 = 0.0;
    for i in 0..index.n() {
        let mut min = coords[(i, 0)];
        let mut max = min;
        for &j in index.neighbors(i) {
            let v = coords[(j, 0)];
            min = min.min(v);
            max = max.max(v);
        }
        if min <= 0.0 && 0.0 <= max {
            r_max = r_max.max(index.radius(i));
            n0.push(i);
        }
    }
    (n0, r_max)
}

/// Both sides of the failure conditions, with the directly computed costs.
#[derive(Clone, Debug, Serialize)]
pub struct Theorem2Report {
    pub lhs_general: f64,
    /// The tighter degree-family condition (LEM/DFM only).
    pub lhs_tight: Option<f64>,
    pub rhs: f64,
    pub verdict_general: bool,
    pub verdict_tight: Option<bool>,
    pub phi_y: f64,
    pub phi_z: f64,
    pub e_bar_1: f64,
    pub e_bar_2: f64,
    pub n0_size: usize,
    pub r_max: f64,
    pub kappa: f64,
    pub rho: f64,
    pub c_a: f64,
}

/// Evaluate the cost-comparison conditions: when the left side falls below
/// e_bar_2 / tau^2, the collapse embedding has strictly lower cost than the
/// faithful one.
pub fn theorem2_check(
    weights: &LocalWeightSet,
    index: &NeighborhoodIndex,
    canon: &CanonicalLatent,
) -> Result<Theorem2Report> {
    let n = canon.n() as f64;
    let errors = column_errors(weights, &canon.coords());
    let (e1, e2) = (errors.means[0], errors.means[1]);
    let (n0, r_max) = n0_and_rmax(index, &canon.coords());
    let collapse = build_z(canon)?;
    let dim = weights.params.dim.unwrap_or(2);
    let (_, c_a) = frobenius_constants(weights.algorithm(), index.k_max(), dim);
    let slope_sq = collapse.v_slope_sq();
    let n0_frac = n0.len() as f64 / n;
    let lhs_general = slope_sq * (e1 + n0_frac * c_a * r_max * r_max);
    let rhs = e2 / canon.tau_sq();
    let y = build_y(canon);
    let phi_y = weights.cost(&y.view());
    let phi_z = weights.cost(&collapse.z.view());
    let tight = matches!(weights.algorithm(), Algorithm::Lem | Algorithm::Dfm);
    let lhs_tight = tight.then(|| slope_sq * e1);
    Ok(Theorem2Report {
        lhs_general,
        lhs_tight,
        rhs,
        verdict_general: lhs_general < rhs,
        verdict_tight: lhs_tight.map(|l| l < rhs),
        phi_y,
        phi_z,
        e_bar_1: e1,
        e_bar_2: e2,
        n0_size: n0.len(),
        r_max,
        kappa: collapse.kappa,
        rho: collapse.rho,
        c_a,
    })
}

/// The aspect-ratio condition with its applicability guards.
#[derive(Clone, Debug, Serialize)]
pub struct Corollary3Report {
    pub lhs: f64,
    /// c = sigma / tau.
    pub aspect: f64,
    pub verdict_inequality: bool,
    pub assumption_e_ratio: bool,
    pub assumption_kappa: bool,
    pub assumption_rho: bool,
    pub predicted_failure: bool,
    /// The degree-family shortcut 4 < c.
    pub simple_verdict: bool,
}

#[allow(clippy::too_many_arguments)]
pub fn corollary3_check(
    e_bar_1: f64,
    e_bar_2: f64,
    kappa: f64,
    rho: f64,
    sigma: f64,
    tau: f64,
    n0_fraction: f64,
    r_max: f64,
    c_a: f64,
) -> Corollary3Report {
    let assumption_e_ratio = e_bar_1 < 2.0f64.sqrt() * e_bar_2;
    let assumption_kappa = kappa < 2.0f64.powf(0.25);
    // The scale guard concerns the unit-slope convention, rho/2.
    let assumption_rho = (rho / 2.0) * (rho / 2.0) > sigma * sigma / 8.0;
    let aspect = sigma / tau;
    let lhs = if e_bar_2 > 0.0 {
        4.0 * (1.0 + n0_fraction * c_a * r_max * r_max / (2.0f64.sqrt() * e_bar_2))
    } else {
        f64::INFINITY
    };
    let verdict_inequality = lhs < aspect;
    Corollary3Report {
        lhs,
        aspect,
        verdict_inequality,
        assumption_e_ratio,
        assumption_kappa,
        assumption_rho,
        predicted_failure: verdict_inequality
            && assumption_e_ratio
            && assumption_kappa
            && assumption_rho,
        simple_verdict: 4.0 < aspect,
    }
}

/// R^2 of predicting each output column from {1, x, |x - median(x)|},
/// combined as the variance-weighted mean over columns. A score of 1 means
/// the output is a V-shaped function of the first latent coordinate alone.
pub fn collapse_score(output: &ArrayView2<f64>, latent_first: &ArrayView1<f64>) -> f64 {
    let n = output.nrows();
    assert_eq!(n, latent_first.len(), "row orders must align");
    let mut sorted: Vec<f64> = latent_first.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite latent"));
    let median = if n % 2 == 1 {
        sorted[n / 2]
    } else {
        0.5 * (sorted[n / 2 - 1] + sorted[n / 2])
    };
    let mut design = Array2::zeros((n, 3));
    for i in 0..n {
        let x = latent_first[i];
        design[(i, 0)] = 1.0;
        design[(i, 1)] = x;
        design[(i, 2)] = (x - median).abs();
    }
    let mut weighted = 0.0;
    let mut total_weight = 0.0;
    for col in output.columns() {
        let mean = col.sum() / n as f64;
        let tss: f64 = col.iter().map(|v| (v - mean) * (v - mean)).sum();
        if tss < 1e-300 {
            continue;
        }
        let rhs = col.to_owned();
        let rss = match design.least_squares(&rhs) {
            Ok(fit) => {
                let pred = design.dot(&fit.solution);
                col.iter()
                    .zip(pred.iter())
                    .map(|(y, p)| (y - p) * (y - p))
                    .sum::<f64>()
            }
            Err(_) => tss,
        };
        let r2 = (1.0 - rss / tss).clamp(0.0, 1.0);
        let var = tss / n as f64;
        weighted += var * r2;
        total_weight += var;
    }
    if total_weight > 0.0 {
        weighted / total_weight
    } else {
        0.0
    }
}

/// Relative residual of the best affine map source -> target
/// (||target - fit||_F / ||target - mean||_F). Zero when the target is an
/// exact affine image of the source.
pub fn affine_alignment_residual(
    source: &ArrayView2<f64>,
    target: &ArrayView2<f64>,
) -> Result<f64> {
    let n = source.nrows();
    if n != target.nrows() {
        return Err(Error::InvalidParameter(
            "affine alignment needs matching row counts".into(),
        ));
    }
    let d = source.ncols();
    let mut design = Array2::zeros((n, d + 1));
    design.slice_mut(ndarray::s![.., ..d]).assign(source);
    design.column_mut(d).fill(1.0);
    let mut rss = 0.0;
    let mut tss = 0.0;
    for col in target.columns() {
        let mean = col.sum() / n as f64;
        tss += col.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>();
        let fit = design
            .least_squares(&col.to_owned())
            .map_err(|e| Error::Eigensolver(format!("affine fit failed: {e}")))?;
        let pred = design.dot(&fit.solution);
        rss += col
            .iter()
            .zip(pred.iter())
            .map(|(y, p)| (y - p) * (y - p))
            .sum::<f64>();
    }
    if tss <= 0.0 {
        return Err(Error::DegenerateCovariance(
            "target embedding is constant".into(),
        ));
    }
    Ok((rss / tss).sqrt())
}

/// Verdict flags of the failure conditions.
#[derive(Clone, Debug, Serialize)]
pub struct Verdicts {
    pub theorem2_general: bool,
    pub theorem2_tight: Option<bool>,
    pub corollary3: bool,
    /// The degree-family shortcut 4 < c (LEM/DFM only).
    pub corollary3_simple: Option<bool>,
}

/// Everything the failure conditions need, with both sides of every
/// inequality reported so near-threshold cases stay inspectable.
#[derive(Clone, Debug, Serialize)]
pub struct DiagnosticsReport {
    pub schema_version: u32,
    pub dataset: String,
    pub algorithm: String,
    pub neighborhood: NeighborhoodMode,
    pub n: usize,
    pub k_max: usize,
    pub sigma: f64,
    pub tau: f64,
    pub rho: f64,
    pub kappa: f64,
    pub e_bar_1: f64,
    pub e_bar_2: f64,
    pub n0_size: usize,
    pub r_max: f64,
    pub c_a: f64,
    pub big_c_a: f64,
    pub phi_y: f64,
    pub phi_z: f64,
    pub theorem2_general_lhs: f64,
    pub theorem2_tight_lhs: Option<f64>,
    pub theorem2_rhs: f64,
    pub corollary3_lhs: f64,
    pub corollary3_rhs: f64,
    pub corollary3_assumption_e_ratio: bool,
    pub corollary3_assumption_kappa: bool,
    pub corollary3_assumption_rho: bool,
    pub verdicts: Verdicts,
    pub collapse_score: Option<f64>,
}

impl DiagnosticsReport {
    /// One-line human-readable verdict.
    pub fn verdict_line(&self) -> String {
        let mut parts = Vec::new();
        if self.verdicts.theorem2_tight == Some(true) {
            parts.push("predicted failure (tight cost condition)".to_string());
        } else if self.verdicts.theorem2_general {
            parts.push("predicted failure (cost condition)".to_string());
        }
        if self.verdicts.corollary3_simple == Some(true) {
            parts.push("predicted failure (Corollary: 4 < c)".to_string());
        } else if self.verdicts.corollary3 {
            parts.push("predicted failure (Corollary: aspect bound)".to_string());
        }
        if parts.is_empty() {
            format!(
                "{} on {}: no failure predicted (c = {:.3})",
                self.algorithm, self.dataset, self.corollary3_rhs
            )
        } else {
            format!(
                "{} on {}: {} (c = {:.3})",
                self.algorithm,
                self.dataset,
                parts.join("; "),
                self.corollary3_rhs
            )
        }
    }
}

/// Run the full diagnostics pipeline for one algorithm on one cloud.
///
/// The latent parameterization (or the points themselves when D = d) must be
/// two-dimensional. An embedding under test may be supplied for scoring.
pub fn run_diagnostics(
    cloud: &PointCloud,
    config: &EmbedConfig,
    embedding_under_test: Option<&ArrayView2<f64>>,
) -> Result<DiagnosticsReport> {
    let index = match config.neighborhood {
        NeighborhoodMode::Knn { k } => NeighborhoodIndex::build_knn(cloud, k)?,
        NeighborhoodMode::RBall { radius } => NeighborhoodIndex::build_rball(cloud, radius)?,
    };
    let weights = crate::weights::build_weights(
        cloud,
        &index,
        config.algorithm,
        config.kernel,
        config.alpha,
        config.lle_regularizer,
        config.dim,
    )?;
    let canon = canonicalize_latent(&cloud.latent_or_points())?;
    if canon.dim() != 2 {
        return Err(Error::InvalidParameter(
            "diagnostics require a two-dimensional latent parameterization".into(),
        ));
    }
    let theorem = theorem2_check(&weights, &index, &canon)?;
    let corollary = corollary3_check(
        theorem.e_bar_1,
        theorem.e_bar_2,
        theorem.kappa,
        theorem.rho,
        canon.sigma(),
        canon.tau(),
        theorem.n0_size as f64 / canon.n() as f64,
        theorem.r_max,
        theorem.c_a,
    );
    let (big_c_a, c_a) = frobenius_constants(config.algorithm, index.k_max(), config.dim.max(1));
    let score = embedding_under_test.map(|y| collapse_score(y, &canon.coords().column(0)));
    let degree_family = matches!(config.algorithm, Algorithm::Lem | Algorithm::Dfm);
    Ok(DiagnosticsReport {
        schema_version: 1,
        dataset: cloud.meta().name.clone(),
        algorithm: config.algorithm.name().to_string(),
        neighborhood: config.neighborhood,
        n: canon.n(),
        k_max: index.k_max(),
        sigma: canon.sigma(),
        tau: canon.tau(),
        rho: theorem.rho,
        kappa: theorem.kappa,
        e_bar_1: theorem.e_bar_1,
        e_bar_2: theorem.e_bar_2,
        n0_size: theorem.n0_size,
        r_max: theorem.r_max,
        c_a,
        big_c_a,
        phi_y: theorem.phi_y,
        phi_z: theorem.phi_z,
        theorem2_general_lhs: theorem.lhs_general,
        theorem2_tight_lhs: theorem.lhs_tight,
        theorem2_rhs: theorem.rhs,
        corollary3_lhs: corollary.lhs,
        corollary3_rhs: corollary.aspect,
        corollary3_assumption_e_ratio: corollary.assumption_e_ratio,
        corollary3_assumption_kappa: corollary.assumption_kappa,
        corollary3_assumption_rho: corollary.assumption_rho,
        verdicts: Verdicts {
            theorem2_general: theorem.verdict_general,
            theorem2_tight: theorem.verdict_tight,
            corollary3: corollary.predicted_failure,
            corollary3_simple: degree_family.then_some(corollary.simple_verdict),
        },
        collapse_score: score,
    })
}
