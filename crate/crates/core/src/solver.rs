//! Global quadratic-form assembly and the constrained eigensolvers.
//!
//! The cost Phi(Y) = sum_i ||W_i Y_i||_F^2 equals trace(Y' M Y) for the
//! assembled symmetric PSD matrix M. Minimizing under either normalization
//! family reduces to a symmetric eigenproblem; the degree-weighted family is
//! handled through the D^{-1/2} similarity transform. The direction that the
//! constraints exclude (constant, respectively D-weighted constant) is
//! deflated explicitly so multiple zero eigenvalues cannot leak it into the
//! output columns.

use ndarray::{Array1, Array2, ArrayView2, Axis};
use ndarray_linalg::{Eigh, UPLO};
use serde::Serialize;

use crate::cloud::PointCloud;
use crate::error::{Error, Result};
use crate::linalg::canonicalize_column_signs;
use crate::neighborhood::{NeighborhoodIndex, NeighborhoodMode};
use crate::weights::{
    build_weights, Algorithm, ConstraintFamily, Kernel, LleRegularizer, LocalWeightSet,
};

const DEGENERACY_GAP_FACTOR: f64 = 1e-10;

/// Assemble the symmetric PSD matrix M with trace(Y'MY) = Phi(Y).
pub fn assemble_quadratic(weights: &LocalWeightSet, n: usize) -> Array2<f64> {
    let mut m = Array2::zeros((n, n));
    for i in 0..weights.n() {
        let block = weights.block(i);
        let gram = block.t().dot(block); // (K+1) x (K+1)
        let mut scatter = Vec::with_capacity(gram.nrows());
        scatter.push(i);
        scatter.extend_from_slice(weights.neighbors(i));
        for (a, &ra) in scatter.iter().enumerate() {
            for (b, &rb) in scatter.iter().enumerate() {
                m[(ra, rb)] += gram[(a, b)];
            }
        }
    }
    // Symmetrize away accumulation round-off.
    for a in 0..n {
        for b in (a + 1)..n {
            let avg = 0.5 * (m[(a, b)] + m[(b, a)]);
            m[(a, b)] = avg;
            m[(b, a)] = avg;
        }
    }
    m
}

/// Raw output of a constrained solve.
#[derive(Clone, Debug)]
pub struct SpectralSolution {
    /// N x d matrix of constraint-normalized eigenvectors (columns sorted by
    /// ascending eigenvalue, signs canonicalized).
    pub vectors: Array2<f64>,
    /// The d+1 smallest constrained eigenvalues, leading with the trivial one.
    pub eigenvalues: Vec<f64>,
    /// The (d+2)-nd smallest eigenvalue, when it exists.
    pub next_eigenvalue: Option<f64>,
    /// True when the spectral gap at the d+1 cut is below resolution.
    pub degenerate_cut: bool,
}

fn deflate(mut b: Array2<f64>, u: &Array1<f64>, shift: f64) -> Array2<f64> {
    // P B P + shift uu' with P = I - uu'.
    let bu = b.dot(u);
    let ubu = u.dot(&bu);
    let n = b.nrows();
    for a in 0..n {
        for c in 0..n {
            b[(a, c)] += -u[a] * bu[c] - bu[a] * u[c] + (ubu + shift) * u[a] * u[c];
        }
    }
    b
}

fn solve_deflated(b: &Array2<f64>, u: &Array1<f64>, d: usize) -> Result<SpectralSolution> {
    let n = b.nrows();
    if d == 0 || d + 1 > n {
        return Err(Error::InvalidParameter(format!(
            "target dimension {d} out of range for {n} points"
        )));
    }
    let trivial = {
        let bu = b.dot(u);
        u.dot(&bu)
    };
    let scale = b.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
    let shift = 10.0 * scale * n as f64 + 1.0;
    let deflated = deflate(b.clone(), u, shift);
    let (values, vectors) = deflated
        .eigh(UPLO::Lower)
        .map_err(|e| Error::Eigensolver(e.to_string()))?;
    let mut taken = vectors.slice(ndarray::s![.., ..d]).to_owned();
    canonicalize_column_signs(&mut taken);
    let mut eigenvalues = Vec::with_capacity(d + 1);
    eigenvalues.push(trivial);
    eigenvalues.extend(values.iter().take(d));
    let next_eigenvalue = (d < n - 1).then(|| values[d]);
    // Largest eigenvalue of the original pencil (the shifted direction sits
    // above everything else, so look one slot down).
    let lambda_max = if n >= 2 { values[n - 2].abs() } else { 0.0 };
    let degenerate_cut = match next_eigenvalue {
        Some(next) => (next - values[d - 1]).abs() < DEGENERACY_GAP_FACTOR * lambda_max.max(1e-300),
        None => false,
    };
    Ok(SpectralSolution {
        vectors: taken,
        eigenvalues,
        next_eigenvalue,
        degenerate_cut,
    })
}

/// Minimize trace(Y'MY) under Cov(Y) = I, Y'1 = 0.
///
/// Output columns are the d+1 smallest eigenvectors of M with the constant
/// direction removed, scaled by sqrt(N).
pub fn solve_cov_constrained(m: &ArrayView2<f64>, d: usize) -> Result<SpectralSolution> {
    let n = m.nrows();
    let u = Array1::from_elem(n, 1.0 / (n as f64).sqrt());
    let mut sol = solve_deflated(&m.to_owned(), &u, d)?;
    sol.vectors *= (n as f64).sqrt();
    Ok(sol)
}

/// Minimize trace(Y'MY) under Y'DY = I, Y'D1 = 0 via the generalized
/// symmetric eigenproblem M v = lambda D v.
pub fn solve_degree_constrained(
    m: &ArrayView2<f64>,
    degrees: &[f64],
    d: usize,
) -> Result<SpectralSolution> {
    let n = m.nrows();
    if degrees.len() != n {
        return Err(Error::InvalidParameter(
            "degree vector length does not match matrix".into(),
        ));
    }
    if degrees.iter().any(|&v| !(v > 0.0)) {
        return Err(Error::InvalidParameter(
            "degree matrix must be strictly positive".into(),
        ));
    }
    let inv_root: Vec<f64> = degrees.iter().map(|&v| 1.0 / v.sqrt()).collect();
    // B = D^{-1/2} M D^{-1/2}.
    let mut b = m.to_owned();
    for a in 0..n {
        for c in 0..n {
            b[(a, c)] *= inv_root[a] * inv_root[c];
        }
    }
    // Trivial direction: D^{1/2} 1, normalized.
    let mut u = Array1::from_iter(degrees.iter().map(|&v| v.sqrt()));
    let norm = u.dot(&u).sqrt();
    u.mapv_inplace(|v| v / norm);
    let mut sol = solve_deflated(&b, &u, d)?;
    // Back-transform: v = D^{-1/2} w keeps v' D v = w'w = 1.
    for (a, &ir) in inv_root.iter().enumerate() {
        for c in 0..d {
            sol.vectors[(a, c)] *= ir;
        }
    }
    canonicalize_column_signs(&mut sol.vectors);
    Ok(sol)
}

/// The DFM embedding transform: column p becomes lambda_p v_p / ||v_p||.
pub fn dfm_output_transform(y: &ArrayView2<f64>, lambdas: &[f64]) -> Result<Array2<f64>> {
    if lambdas.len() != y.ncols() {
        return Err(Error::InvalidParameter(
            "need one eigenvalue per output column".into(),
        ));
    }
    let mut out = y.to_owned();
    for (p, mut col) in out.columns_mut().into_iter().enumerate() {
        let norm = col.dot(&col).sqrt();
        if norm == 0.0 {
            return Err(Error::Eigensolver(format!(
                "output column {p} has zero norm"
            )));
        }
        let scale = lambdas[p] / norm;
        col.mapv_inplace(|v| v * scale);
    }
    Ok(out)
}

/// Full configuration for one embedding run.
#[derive(Clone, Debug, Serialize)]
pub struct EmbedConfig {
    pub algorithm: Algorithm,
    pub neighborhood: NeighborhoodMode,
    pub kernel: Kernel,
    pub alpha: f64,
    pub lle_regularizer: LleRegularizer,
    pub dim: usize,
}

impl EmbedConfig {
    pub fn new(algorithm: Algorithm, neighborhood: NeighborhoodMode, dim: usize) -> Self {
        let kernel = match algorithm {
            Algorithm::Dfm => Kernel::Gaussian { width: 4.0 },
            _ => Kernel::Window,
        };
        Self {
            algorithm,
            neighborhood,
            kernel,
            alpha: 1.0,
            lle_regularizer: LleRegularizer::default(),
            dim,
        }
    }

    pub fn with_kernel(mut self, kernel: Kernel) -> Self {
        self.kernel = kernel;
        self
    }

    pub fn with_alpha(mut self, alpha: f64) -> Self {
        self.alpha = alpha;
        self
    }

    pub fn with_lle_regularizer(mut self, reg: LleRegularizer) -> Self {
        self.lle_regularizer = reg;
        self
    }
}

/// Result of one embedding run.
#[derive(Clone, Debug)]
pub struct EmbeddingResult {
    pub algorithm: Algorithm,
    pub constraint_family: ConstraintFamily,
    /// N x d output matrix satisfying the family's normalization constraints.
    pub y: Array2<f64>,
    /// (1/sqrt(N)) Y, reported for LTSA and HLLE.
    pub scaled_y: Option<Array2<f64>>,
    /// Phi(Y), recomputed directly from the weight blocks.
    pub cost: f64,
    /// The d+1 smallest constrained eigenvalues (trivial one first).
    pub eigenvalues: Vec<f64>,
    pub degenerate_cut: bool,
    /// The DFM embedding after its linear output transform.
    pub dfm_embedding: Option<Array2<f64>>,
}

impl EmbeddingResult {
    /// Residuals of the normalization constraints: (||Cov-ish - I||_F, ||mean-ish||).
    pub fn constraint_residuals(&self, degrees: Option<&[f64]>) -> (f64, f64) {
        let n = self.y.nrows();
        let d = self.y.ncols();
        match self.constraint_family {
            ConstraintFamily::Covariance => {
                let cov = crate::linalg::covariance(&self.y.view());
                let eye = Array2::<f64>::eye(d);
                let cov_resid = crate::linalg::frobenius_norm(&(&cov - &eye).view());
                let col_sums = self.y.sum_axis(Axis(0));
                let mean_resid = col_sums.dot(&col_sums).sqrt(); // ||Y'1||
                (cov_resid, mean_resid)
            }
            ConstraintFamily::DegreeWeighted => {
                let degrees = degrees.expect("degree family requires degrees");
                let mut gram = Array2::<f64>::zeros((d, d));
                let mut dmean = Array1::<f64>::zeros(d);
                for r in 0..n {
                    let w = degrees[r];
                    for a in 0..d {
                        dmean[a] += w * self.y[(r, a)];
                        for b in 0..d {
                            gram[(a, b)] += w * self.y[(r, a)] * self.y[(r, b)];
                        }
                    }
                }
                let eye = Array2::<f64>::eye(d);
                let gram_resid = crate::linalg::frobenius_norm(&(&gram - &eye).view());
                (gram_resid, dmean.dot(&dmean).sqrt())
            }
        }
    }
}

/// Compose neighborhood construction, weights, assembly, and the constrained
/// solve appropriate for the algorithm.
pub fn embed(cloud: &PointCloud, config: &EmbedConfig) -> Result<EmbeddingResult> {
    let index = match config.neighborhood {
        NeighborhoodMode::Knn { k } => NeighborhoodIndex::build_knn(cloud, k)?,
        NeighborhoodMode::RBall { radius } => NeighborhoodIndex::build_rball(cloud, radius)?,
    };
    embed_with_index(cloud, &index, config)
}

pub fn embed_with_index(
    cloud: &PointCloud,
    index: &NeighborhoodIndex,
    config: &EmbedConfig,
) -> Result<EmbeddingResult> {
    let components = index.component_count();
    if components != 1 {
        return Err(Error::Disconnected { components });
    }
    let weights = build_weights(
        cloud,
        index,
        config.algorithm,
        config.kernel,
        config.alpha,
        config.lle_regularizer,
        config.dim,
    )?;
    embed_with_weights(cloud, &weights, config.dim)
}

pub fn embed_with_weights(
    cloud: &PointCloud,
    weights: &LocalWeightSet,
    dim: usize,
) -> Result<EmbeddingResult> {
    let n = cloud.n();
    let m = assemble_quadratic(weights, n);
    let family = weights.algorithm().constraint_family();
    let sol = match family {
        ConstraintFamily::Covariance => solve_cov_constrained(&m.view(), dim)?,
        ConstraintFamily::DegreeWeighted => {
            let degrees = weights.degrees().expect("degree family carries degrees");
            solve_degree_constrained(&m.view(), degrees, dim)?
        }
    };
    let y = sol.vectors;
    let cost = weights.cost(&y.view());
    let scaled_y = matches!(
        weights.algorithm(),
        Algorithm::Ltsa | Algorithm::Hlle
    )
    .then(|| &y / (n as f64).sqrt());
    let dfm_embedding = if weights.algorithm() == Algorithm::Dfm {
        // Markov-chain eigenvalues of the diffusion operator: the assembled
        // quadratic form counts each edge in both directions, so the
        // generalized eigenvalue mu relates by lambda = 1 - mu/2.
        let lambdas: Vec<f64> = sol.eigenvalues[1..]
            .iter()
            .map(|mu| 1.0 - mu / 2.0)
            .collect();
        Some(dfm_output_transform(&y.view(), &lambdas)?)
    } else {
        None
    };
    Ok(EmbeddingResult {
        algorithm: weights.algorithm(),
        constraint_family: family,
        y,
        scaled_y,
        cost,
        eigenvalues: sol.eigenvalues,
        degenerate_cut: sol.degenerate_cut,
        dfm_embedding,
    })
}

/// JSON document for an embedding result (matrices in row-major order).
#[derive(Serialize)]
pub struct EmbeddingResultJson {
    pub algorithm: String,
    pub constraint_family: String,
    pub n: usize,
    pub d: usize,
    pub y_row_major: Vec<f64>,
    pub scaled_y_row_major: Option<Vec<f64>>,
    pub dfm_embedding_row_major: Option<Vec<f64>>,
    pub cost: f64,
    pub eigenvalues: Vec<f64>,
    pub degenerate_cut: bool,
    pub constraint_residual_gram: f64,
    pub constraint_residual_mean: f64,
}

impl EmbeddingResult {
    pub fn to_json(&self, degrees: Option<&[f64]>) -> EmbeddingResultJson {
        let (gram, mean) = self.constraint_residuals(degrees);
        EmbeddingResultJson {
            algorithm: self.algorithm.name().to_string(),
            constraint_family: match self.constraint_family {
                ConstraintFamily::Covariance => "covariance".into(),
                ConstraintFamily::DegreeWeighted => "degree-weighted".into(),
            },
            n: self.y.nrows(),
            d: self.y.ncols(),
            y_row_major: self.y.iter().cloned().collect(),
            scaled_y_row_major: self.scaled_y.as_ref().map(|m| m.iter().cloned().collect()),
            dfm_embedding_row_major: self
                .dfm_embedding
                .as_ref()
                .map(|m| m.iter().cloned().collect()),
            cost: self.cost,
            eigenvalues: self.eigenvalues.clone(),
            degenerate_cut: self.degenerate_cut,
            constraint_residual_gram: gram,
            constraint_residual_mean: mean,
        }
    }
}
