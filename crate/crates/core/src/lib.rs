//! Spectral manifold learning with embedding-collapse diagnostics.
//!
//! Five normalized-output algorithms (Laplacian eigenmaps, diffusion maps,
//! locally linear embedding, local tangent space alignment, and Hessian
//! eigenmaps) share one pipeline here: build a neighborhood graph, describe
//! each neighborhood with a weight matrix W_i, and minimize the quadratic
//! cost Phi(Y) = sum_i ||W_i Y_i||_F^2 under an output-normalization
//! constraint. The [`diagnostics`] module constructs the low-cost
//! "collapse" embeddings that compete with the faithful one and evaluates
//! the necessary conditions predicting when each algorithm fails to recover
//! a manifold's structure.

pub mod cloud;
pub mod dataset;
pub mod diagnostics;
pub mod error;
pub(crate) mod linalg;
pub mod neighborhood;
pub mod solver;
pub mod weights;

pub use cloud::{CloudMeta, PointCloud};
pub use error::{Error, Result};
pub use neighborhood::{NeighborhoodIndex, NeighborhoodMode};
pub use solver::{embed, EmbedConfig, EmbeddingResult};
pub use weights::{Algorithm, ConstraintFamily, Kernel, LleRegularizer, LocalWeightSet};
