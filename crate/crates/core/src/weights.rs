//! Per-neighborhood weight matrices W_i for the five normalized-output
//! algorithms, plus the degree entries used by the degree-weighted
//! constraint family.
//!
//! Shapes per algorithm (K = neighborhood size, d = target dimension):
//! LEM/DFM K x (K+1), LLE 1 x (K+1), LTSA (K+1) x (K+1),
//! HLLE d(d+1)/2 x (K+1). Every row of every W_i annihilates the constant
//! vector, so constant embeddings always have zero cost.

use ndarray::{s, Array1, Array2, ArrayView1, ArrayView2, Axis};
use ndarray_linalg::{Eigh, LeastSquaresSvd, Solve, SVD, UPLO};
use serde::{Deserialize, Serialize};

use crate::cloud::PointCloud;
use crate::error::{Error, Result};
use crate::linalg::canonicalize_column_signs;
use crate::neighborhood::NeighborhoodIndex;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Algorithm {
    Lem,
    Dfm,
    Lle,
    Ltsa,
    Hlle,
}

impl Algorithm {
    pub const ALL: [Algorithm; 5] = [
        Algorithm::Lem,
        Algorithm::Dfm,
        Algorithm::Lle,
        Algorithm::Ltsa,
        Algorithm::Hlle,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Algorithm::Lem => "lem",
            Algorithm::Dfm => "dfm",
            Algorithm::Lle => "lle",
            Algorithm::Ltsa => "ltsa",
            Algorithm::Hlle => "hlle",
        }
    }

    pub fn constraint_family(&self) -> ConstraintFamily {
        match self {
            Algorithm::Lem | Algorithm::Dfm => ConstraintFamily::DegreeWeighted,
            _ => ConstraintFamily::Covariance,
        }
    }
}

impl std::str::FromStr for Algorithm {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "lem" => Ok(Algorithm::Lem),
            "dfm" => Ok(Algorithm::Dfm),
            "lle" => Ok(Algorithm::Lle),
            "ltsa" => Ok(Algorithm::Ltsa),
            "hlle" => Ok(Algorithm::Hlle),
            other => Err(Error::InvalidParameter(format!(
                "unknown algorithm {other:?} (expected lem, dfm, lle, ltsa, or hlle)"
            ))),
        }
    }
}

impl std::fmt::Display for Algorithm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Output normalization family.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ConstraintFamily {
    /// Cov(Y) = I, Y'1 = 0.
    Covariance,
    /// Y'DY = I, Y'D1 = 0.
    DegreeWeighted,
}

/// Rotation-invariant kernel on squared distances.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum Kernel {
    Window,
    /// k(x, y) = exp(-||x - y||^2 / width); `width` is the epsilon parameter.
    Gaussian { width: f64 },
}

impl Kernel {
    pub fn eval(&self, dist_sq: f64) -> f64 {
        match self {
            Kernel::Window => 1.0,
            Kernel::Gaussian { width } => (-dist_sq / width).exp(),
        }
    }

    fn validate(&self) -> Result<()> {
        if let Kernel::Gaussian { width } = self {
            if !(*width > 0.0) || !width.is_finite() {
                return Err(Error::InvalidParameter(
                    "gaussian kernel width must be positive and finite".into(),
                ));
            }
        }
        Ok(())
    }
}

/// Policy for the LLE local least-squares solve.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum LleRegularizer {
    /// Exact constrained minimizer (minimum-norm when the optimum is not
    /// unique). No ridge term.
    None,
    /// Ridge term delta * trace(Gram)/K added when the Gram matrix is
    /// ill-conditioned (condition number > 1e12) or K > D.
    Ridge { delta: f64 },
    /// Weights constrained to the probability simplex (w >= 0, sum 1).
    NonNegative,
}

impl Default for LleRegularizer {
    fn default() -> Self {
        LleRegularizer::Ridge { delta: 1e-3 }
    }
}

const LLE_CONDITION_LIMIT: f64 = 1e12;
const GRAM_SCHMIDT_TOL: f64 = 1e-10;

/// Parameters recorded alongside a weight set.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct WeightParams {
    pub kernel: Option<Kernel>,
    pub alpha: Option<f64>,
    pub regularizer: Option<LleRegularizer>,
    pub dim: Option<usize>,
}

/// The per-point weight matrices for one algorithm on one neighborhood graph.
#[derive(Clone, Debug)]
pub struct LocalWeightSet {
    algorithm: Algorithm,
    neighborhoods: Vec<Vec<usize>>,
    blocks: Vec<Array2<f64>>,
    degrees: Option<Vec<f64>>,
    pair_weights: Option<Vec<Vec<f64>>>,
    pub params: WeightParams,
}

impl LocalWeightSet {
    pub fn algorithm(&self) -> Algorithm {
        self.algorithm
    }

    pub fn n(&self) -> usize {
        self.blocks.len()
    }

    pub fn block(&self, i: usize) -> &Array2<f64> {
        &self.blocks[i]
    }

    pub fn neighbors(&self, i: usize) -> &[usize] {
        &self.neighborhoods[i]
    }

    /// Diagonal degree entries d_ii = sum_j w_ij (LEM/DFM only).
    pub fn degrees(&self) -> Option<&[f64]> {
        self.degrees.as_deref()
    }

    /// Raw pairwise weights w_{i,j} per neighbor slot (LEM/DFM/LLE).
    pub fn pair_weights(&self) -> Option<&[Vec<f64>]> {
        self.pair_weights.as_deref()
    }

    pub fn min_pair_weight(&self) -> Option<f64> {
        self.pair_weights
            .as_ref()
            .map(|w| w.iter().flatten().cloned().fold(f64::INFINITY, f64::min))
    }

    pub fn k_max(&self) -> usize {
        self.neighborhoods.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// The stacked neighborhood rows [y_i; y_{i,1}; ...; y_{i,K}].
    fn gather(&self, i: usize, y: &ArrayView2<f64>) -> Array2<f64> {
        let nbrs = &self.neighborhoods[i];
        let mut out = Array2::zeros((nbrs.len() + 1, y.ncols()));
        out.row_mut(0).assign(&y.row(i));
        for (slot, &j) in nbrs.iter().enumerate() {
            out.row_mut(slot + 1).assign(&y.row(j));
        }
        out
    }

    /// phi(Y_i) = ||W_i Y_i||_F^2 for one neighborhood.
    pub fn neighborhood_cost(&self, i: usize, y: &ArrayView2<f64>) -> f64 {
        let yi = self.gather(i, y);
        let prod = self.blocks[i].dot(&yi);
        prod.iter().map(|v| v * v).sum()
    }

    /// Phi(Y) = sum_i ||W_i Y_i||_F^2.
    pub fn cost(&self, y: &ArrayView2<f64>) -> f64 {
        (0..self.n()).map(|i| self.neighborhood_cost(i, y)).sum()
    }

    /// Phi restricted to a single output column.
    pub fn column_cost(&self, col: &ArrayView1<f64>) -> f64 {
        let as_matrix = col.insert_axis(Axis(1));
        self.cost(&as_matrix)
    }

    /// ||W_i X_i||_F^2 on the input neighborhood (Lemma-3 style quantity).
    pub fn input_cost(&self, i: usize, points: &ArrayView2<f64>) -> f64 {
        self.neighborhood_cost(i, points)
    }

    /// max_i ||W_i||_F^2, for checking the perturbation-lemma constant.
    pub fn max_block_frobenius_sq(&self) -> f64 {
        self.blocks
            .iter()
            .map(|b| b.iter().map(|v| v * v).sum::<f64>())
            .fold(0.0, f64::max)
    }

    /// Debug-oriented JSON view (blocks in row-major order).
    pub fn to_debug_json(&self) -> serde_json::Value {
        serde_json::json!({
            "algorithm": self.algorithm.name(),
            "params": self.params,
            "degrees": self.degrees,
            "neighborhoods": self.neighborhoods,
            "blocks": self
                .blocks
                .iter()
                .map(|b| {
                    serde_json::json!({
                        "rows": b.nrows(),
                        "cols": b.ncols(),
                        "data": b.iter().cloned().collect::<Vec<f64>>(),
                    })
                })
                .collect::<Vec<_>>(),
        })
    }
}

fn neighborhood_matrix(points: &ArrayView2<f64>, center: usize, nbrs: &[usize]) -> Array2<f64> {
    let mut out = Array2::zeros((nbrs.len() + 1, points.ncols()));
    out.row_mut(0).assign(&points.row(center));
    for (slot, &j) in nbrs.iter().enumerate() {
        out.row_mut(slot + 1).assign(&points.row(j));
    }
    out
}

fn pairwise_kernel_row(
    points: &ArrayView2<f64>,
    i: usize,
    nbrs: &[usize],
    kernel: Kernel,
) -> Vec<f64> {
    nbrs.iter()
        .map(|&j| {
            let d_sq: f64 = points
                .row(i)
                .iter()
                .zip(points.row(j).iter())
                .map(|(a, b)| (a - b) * (a - b))
                .sum();
            kernel.eval(d_sq)
        })
        .collect()
}

fn lem_like_blocks(weights: &[Vec<f64>]) -> (Vec<Array2<f64>>, Vec<f64>) {
    let mut blocks = Vec::with_capacity(weights.len());
    let mut degrees = Vec::with_capacity(weights.len());
    for row in weights {
        let k = row.len();
        let mut block = Array2::zeros((k, k + 1));
        for (j, &w) in row.iter().enumerate() {
            let root = w.sqrt();
            block[(j, 0)] = root;
            block[(j, j + 1)] = -root;
        }
        blocks.push(block);
        degrees.push(row.iter().sum());
    }
    (blocks, degrees)
}

/// LEM weights: w_ij = 1 (window) or the Gaussian kernel weights.
pub fn lem_weights(
    cloud: &PointCloud,
    index: &NeighborhoodIndex,
    kernel: Kernel,
) -> Result<LocalWeightSet> {
    kernel.validate()?;
    let points = cloud.points();
    let weights: Vec<Vec<f64>> = (0..index.n())
        .map(|i| pairwise_kernel_row(&points, i, index.neighbors(i), kernel))
        .collect();
    let (blocks, degrees) = lem_like_blocks(&weights);
    Ok(LocalWeightSet {
        algorithm: Algorithm::Lem,
        neighborhoods: (0..index.n()).map(|i| index.neighbors(i).to_vec()).collect(),
        blocks,
        degrees: Some(degrees),
        pair_weights: Some(weights),
        params: WeightParams {
            kernel: Some(kernel),
            alpha: None,
            regularizer: None,
            dim: None,
        },
    })
}

/// DFM weights: w_ij = k(x_i, x_ij) / (q(x_i)^alpha q(x_ij)^alpha) with
/// q(x_i) = sum_j k(x_i, x_ij).
pub fn dfm_weights(
    cloud: &PointCloud,
    index: &NeighborhoodIndex,
    kernel: Kernel,
    alpha: f64,
) -> Result<LocalWeightSet> {
    kernel.validate()?;
    if !alpha.is_finite() {
        return Err(Error::InvalidParameter("alpha must be finite".into()));
    }
    let points = cloud.points();
    let kernel_rows: Vec<Vec<f64>> = (0..index.n())
        .map(|i| pairwise_kernel_row(&points, i, index.neighbors(i), kernel))
        .collect();
    for (i, row) in kernel_rows.iter().enumerate() {
        if row.iter().any(|&k| !(k > 0.0)) {
            return Err(Error::InvalidParameter(format!(
                "kernel vanished on a neighbor pair of point {i}; widen the kernel"
            )));
        }
    }
    let q: Vec<f64> = kernel_rows.iter().map(|row| row.iter().sum()).collect();
    if let Some(i) = q.iter().position(|&v| !(v > 0.0)) {
        return Err(Error::ZeroKernelSum { index: i });
    }
    let weights: Vec<Vec<f64>> = kernel_rows
        .iter()
        .enumerate()
        .map(|(i, row)| {
            index
                .neighbors(i)
                .iter()
                .zip(row.iter())
                .map(|(&j, &k)| k / (q[i].powf(alpha) * q[j].powf(alpha)))
                .collect()
        })
        .collect();
    let (blocks, degrees) = lem_like_blocks(&weights);
    Ok(LocalWeightSet {
        algorithm: Algorithm::Dfm,
        neighborhoods: (0..index.n()).map(|i| index.neighbors(i).to_vec()).collect(),
        blocks,
        degrees: Some(degrees),
        pair_weights: Some(weights),
        params: WeightParams {
            kernel: Some(kernel),
            alpha: Some(alpha),
            regularizer: None,
            dim: None,
        },
    })
}

fn lle_local_weights(
    diffs: &Array2<f64>, // K x D rows x_ij - x_i
    regularizer: LleRegularizer,
    ambient_dim: usize,
) -> Result<Vec<f64>> {
    let k = diffs.nrows();
    let gram = diffs.dot(&diffs.t());
    match regularizer {
        LleRegularizer::Ridge { delta } => {
            let mut g = gram;
            let needs_ridge = k > ambient_dim || {
                let (vals, _) = g.eigh(UPLO::Lower)?;
                let max = vals[vals.len() - 1].abs();
                let min = vals[0];
                min <= 0.0 || max / min > LLE_CONDITION_LIMIT
            };
            if needs_ridge {
                let trace: f64 = g.diag().sum();
                let ridge = delta * trace / k as f64;
                for a in 0..k {
                    g[(a, a)] += ridge.max(delta * 1e-12);
                }
            }
            let ones = Array1::from_elem(k, 1.0);
            let solved = g
                .solve(&ones)
                .map_err(|e| Error::Eigensolver(format!("LLE local solve failed: {e}")))?;
            let total: f64 = solved.sum();
            if total.abs() < 1e-300 {
                return Ok(vec![1.0 / k as f64; k]);
            }
            Ok(solved.iter().map(|v| v / total).collect())
        }
        LleRegularizer::None => {
            // Exact constrained minimum via the affine parameterization
            // w = w0 + B z with w0 uniform and B spanning {1}^perp.
            if k == 1 {
                return Ok(vec![1.0]);
            }
            let w0 = Array1::from_elem(k, 1.0 / k as f64);
            let basis = crate::linalg::ones_complement_basis(k);
            let a = diffs.t().dot(&basis); // D x (K-1)
            let rhs = -diffs.t().dot(&w0); // D
            let sol = a
                .least_squares(&rhs)
                .map_err(|e| Error::Eigensolver(format!("LLE least squares failed: {e}")))?;
            let w = &w0 + &basis.dot(&sol.solution);
            Ok(w.to_vec())
        }
        LleRegularizer::NonNegative => {
            if k > 16 {
                return Err(Error::InvalidParameter(
                    "non-negative LLE weights support K <= 16".into(),
                ));
            }
            nonnegative_simplex_min(&gram)
        }
    }
}

/// Exact minimizer of w'Gw over the probability simplex by enumerating
/// support sets (G is PSD and K is small).
fn nonnegative_simplex_min(gram: &Array2<f64>) -> Result<Vec<f64>> {
    let k = gram.nrows();
    let mut best: Option<(f64, Vec<f64>)> = None;
    for mask in 1u32..(1 << k) {
        let support: Vec<usize> = (0..k).filter(|&j| mask & (1 << j) != 0).collect();
        let s = support.len();
        // KKT system [2G_SS 1; 1' 0] [w; lambda] = [0; 1].
        let mut kkt = Array2::zeros((s + 1, s + 1));
        for (a, &ja) in support.iter().enumerate() {
            for (b, &jb) in support.iter().enumerate() {
                kkt[(a, b)] = 2.0 * gram[(ja, jb)];
            }
            kkt[(a, s)] = 1.0;
            kkt[(s, a)] = 1.0;
        }
        let mut rhs = Array1::zeros(s + 1);
        rhs[s] = 1.0;
        let Ok(sol) = kkt.least_squares(&rhs) else {
            continue;
        };
        let w_s = sol.solution.slice(s![..s]).to_owned();
        let total: f64 = w_s.sum();
        if (total - 1.0).abs() > 1e-6 || w_s.iter().any(|&v| v < -1e-9) {
            continue;
        }
        let mut objective = 0.0;
        for (a, &ja) in support.iter().enumerate() {
            for (b, &jb) in support.iter().enumerate() {
                objective += w_s[a] * gram[(ja, jb)] * w_s[b];
            }
        }
        let better = match &best {
            None => true,
            Some((obj, _)) => objective < obj - 1e-15,
        };
        if better {
            let mut w = vec![0.0; k];
            for (a, &ja) in support.iter().enumerate() {
                w[ja] = w_s[a].max(0.0);
            }
            let norm: f64 = w.iter().sum();
            for v in &mut w {
                *v /= norm;
            }
            best = Some((objective, w));
        }
    }
    best.map(|(_, w)| w)
        .ok_or_else(|| Error::Eigensolver("non-negative LLE solve found no feasible support".into()))
}

/// LLE reconstruction weights; rows of W_i are (1, -w_1, ..., -w_K).
pub fn lle_weights(
    cloud: &PointCloud,
    index: &NeighborhoodIndex,
    regularizer: LleRegularizer,
) -> Result<LocalWeightSet> {
    let points = cloud.points();
    let d = cloud.dim();
    let mut blocks = Vec::with_capacity(index.n());
    let mut all_weights = Vec::with_capacity(index.n());
    for i in 0..index.n() {
        let nbrs = index.neighbors(i);
        let k = nbrs.len();
        let mut diffs = Array2::zeros((k, d));
        for (slot, &j) in nbrs.iter().enumerate() {
            for c in 0..d {
                diffs[(slot, c)] = points[(j, c)] - points[(i, c)];
            }
        }
        let w = lle_local_weights(&diffs, regularizer, d)?;
        let mut block = Array2::zeros((1, k + 1));
        block[(0, 0)] = 1.0;
        for (slot, &wj) in w.iter().enumerate() {
            block[(0, slot + 1)] = -wj;
        }
        blocks.push(block);
        all_weights.push(w);
    }
    Ok(LocalWeightSet {
        algorithm: Algorithm::Lle,
        neighborhoods: (0..index.n()).map(|i| index.neighbors(i).to_vec()).collect(),
        blocks,
        degrees: None,
        pair_weights: Some(all_weights),
        params: WeightParams {
            kernel: None,
            alpha: None,
            regularizer: Some(regularizer),
            dim: None,
        },
    })
}

/// LTSA weights W_i = (I - P_i P_i') H over the K+1 neighborhood rows, with
/// P_i the first d left singular vectors of the centered neighborhood.
pub fn ltsa_weights(
    cloud: &PointCloud,
    index: &NeighborhoodIndex,
    d: usize,
) -> Result<LocalWeightSet> {
    if d == 0 {
        return Err(Error::InvalidParameter("target dimension must be >= 1".into()));
    }
    let points = cloud.points();
    let mut blocks = Vec::with_capacity(index.n());
    for i in 0..index.n() {
        let nbrs = index.neighbors(i);
        let k = nbrs.len();
        if k < d {
            return Err(Error::InvalidParameter(format!(
                "LTSA requires K >= d; neighborhood {i} has K={k} < d={d}"
            )));
        }
        let rows = k + 1;
        let x = neighborhood_matrix(&points, i, nbrs);
        let mean = x.mean_axis(Axis(0)).expect("non-empty");
        let centered = &x - &mean.view().insert_axis(Axis(0));
        let (u_opt, _s, _) = centered.svd(true, false)?;
        let u = u_opt.expect("left singular vectors requested");
        let mut p = u.slice(s![.., ..d]).to_owned();
        canonicalize_column_signs(&mut p);
        // H = I - 11'/(K+1); W = (I - PP') H.
        let mut h = Array2::from_elem((rows, rows), -1.0 / rows as f64);
        for a in 0..rows {
            h[(a, a)] += 1.0;
        }
        let pth = p.t().dot(&h);
        let w = &h - &p.dot(&pth);
        blocks.push(w);
    }
    Ok(LocalWeightSet {
        algorithm: Algorithm::Ltsa,
        neighborhoods: (0..index.n()).map(|i| index.neighbors(i).to_vec()).collect(),
        blocks,
        degrees: None,
        pair_weights: None,
        params: WeightParams {
            kernel: None,
            alpha: None,
            regularizer: None,
            dim: Some(d),
        },
    })
}

/// HLLE weights W_i = (0, H^i) with H^i the Hessian estimator over the K
/// neighbor rows: Gram-Schmidt on [1, U, quadratic products of U columns],
/// then the last d(d+1)/2 columns transposed.
pub fn hlle_weights(
    cloud: &PointCloud,
    index: &NeighborhoodIndex,
    d: usize,
) -> Result<LocalWeightSet> {
    if d == 0 {
        return Err(Error::InvalidParameter("target dimension must be >= 1".into()));
    }
    let h_count = d * (d + 1) / 2;
    let points = cloud.points();
    let mut blocks = Vec::with_capacity(index.n());
    for i in 0..index.n() {
        let nbrs = index.neighbors(i);
        let k = nbrs.len();
        if k < d + h_count {
            return Err(Error::InvalidParameter(format!(
                "HLLE requires K >= d + d(d+1)/2 = {}; neighborhood {i} has K={k}",
                d + h_count
            )));
        }
        let mut b = Array2::zeros((k, points.ncols()));
        for (slot, &j) in nbrs.iter().enumerate() {
            b.row_mut(slot).assign(&points.row(j));
        }
        let mean = b.mean_axis(Axis(0)).expect("non-empty");
        let centered = &b - &mean.view().insert_axis(Axis(0));
        let (u_opt, _s, _) = centered.svd(true, false)?;
        let u = u_opt.expect("left singular vectors requested");
        if u.ncols() < d {
            return Err(Error::RankDeficient {
                neighborhood: i,
                column: u.ncols(),
            });
        }
        let mut tangent = u.slice(s![.., ..d]).to_owned();
        canonicalize_column_signs(&mut tangent);

        // M = [1, U^{(1..d)}, diag(U^{(a)} U^{(b)'}) for a <= b].
        let cols = 1 + d + h_count;
        let mut m = Array2::zeros((k, cols));
        for r in 0..k {
            m[(r, 0)] = 1.0;
        }
        for c in 0..d {
            m.column_mut(1 + c).assign(&tangent.column(c));
        }
        let mut cursor = 1 + d;
        for a in 0..d {
            for b_col in a..d {
                for r in 0..k {
                    m[(r, cursor)] = tangent[(r, a)] * tangent[(r, b_col)];
                }
                cursor += 1;
            }
        }

        // Modified Gram-Schmidt with a relative rank tolerance.
        for c in 0..cols {
            let orig_norm = m.column(c).iter().map(|v| v * v).sum::<f64>().sqrt();
            for prev in 0..c {
                let proj = m.column(prev).dot(&m.column(c));
                let prev_col = m.column(prev).to_owned();
                m.column_mut(c).zip_mut_with(&prev_col, |x, &p| *x -= proj * p);
            }
            let norm = m.column(c).iter().map(|v| v * v).sum::<f64>().sqrt();
            if norm < GRAM_SCHMIDT_TOL * orig_norm.max(f64::MIN_POSITIVE) {
                return Err(Error::RankDeficient {
                    neighborhood: i,
                    column: c,
                });
            }
            m.column_mut(c).mapv_inplace(|v| v / norm);
        }

        // W_i = (0, H^i): zero column for the center, estimator on the K neighbors.
        let mut w = Array2::zeros((h_count, k + 1));
        for (row, c) in (cols - h_count..cols).enumerate() {
            for r in 0..k {
                w[(row, r + 1)] = m[(r, c)];
            }
        }
        blocks.push(w);
    }
    Ok(LocalWeightSet {
        algorithm: Algorithm::Hlle,
        neighborhoods: (0..index.n()).map(|i| index.neighbors(i).to_vec()).collect(),
        blocks,
        degrees: None,
        pair_weights: None,
        params: WeightParams {
            kernel: None,
            alpha: None,
            regularizer: None,
            dim: Some(d),
        },
    })
}

/// Build weights for any algorithm from a shared parameter set.
pub fn build_weights(
    cloud: &PointCloud,
    index: &NeighborhoodIndex,
    algorithm: Algorithm,
    kernel: Kernel,
    alpha: f64,
    lle_regularizer: LleRegularizer,
    dim: usize,
) -> Result<LocalWeightSet> {
    match algorithm {
        Algorithm::Lem => lem_weights(cloud, index, kernel),
        Algorithm::Dfm => dfm_weights(cloud, index, kernel, alpha),
        Algorithm::Lle => lle_weights(cloud, index, lle_regularizer),
        Algorithm::Ltsa => ltsa_weights(cloud, index, dim),
        Algorithm::Hlle => hlle_weights(cloud, index, dim),
    }
}

/// The algorithm-dependent constants (C_a, c_a): C_a bounds ||W_i||_F^2 in
/// the perturbation bound, c_a bounds ||W_i X_i||_F^2 / r(i)^2.
pub fn frobenius_constants(algorithm: Algorithm, k: usize, d: usize) -> (f64, f64) {
    let kf = k as f64;
    match algorithm {
        Algorithm::Lem | Algorithm::Dfm => (2.0 * kf, kf),
        Algorithm::Lle => (2.0, 1.0 / kf),
        Algorithm::Ltsa => (kf, kf * kf),
        Algorithm::Hlle => {
            let h = (d * (d + 1) / 2) as f64;
            (h, h * (kf + 1.0))
        }
    }
}
