//! Behavior of the assembled quadratic form and the constrained solvers.

mod common;

use approx::assert_abs_diff_eq;
use manifold_core::dataset::{gen_grid, gen_swissroll, gen_uniform_strip};
use manifold_core::diagnostics::{affine_alignment_residual, build_y, canonicalize_latent};
use manifold_core::solver::{
    assemble_quadratic, dfm_output_transform, embed, solve_cov_constrained,
    solve_degree_constrained, EmbedConfig,
};
use manifold_core::weights::{
    build_weights, lem_weights, lle_weights, ltsa_weights, Algorithm, Kernel, LleRegularizer,
};
use manifold_core::{NeighborhoodIndex, NeighborhoodMode, PointCloud};
use ndarray::{Array1, Array2};
use rand::Rng;

fn all_algorithm_weights(
    cloud: &PointCloud,
    index: &NeighborhoodIndex,
) -> Vec<manifold_core::LocalWeightSet> {
    Algorithm::ALL
        .iter()
        .map(|&algorithm| {
            build_weights(
                cloud,
                index,
                algorithm,
                match algorithm {
                    Algorithm::Dfm => Kernel::Gaussian { width: 1.0 },
                    _ => Kernel::Window,
                },
                1.0,
                LleRegularizer::default(),
                2,
            )
            .unwrap()
        })
        .collect()
}

#[test]
fn assembled_form_reproduces_the_neighborhood_sum() {
    let cloud = common::random_cloud(40, 3, 101);
    let index = NeighborhoodIndex::build_knn(&cloud, 8).unwrap();
    let mut r = common::rng(102);
    for weights in all_algorithm_weights(&cloud, &index) {
        let m = assemble_quadratic(&weights, cloud.n());
        for _ in 0..3 {
            let y = Array2::from_shape_fn((cloud.n(), 2), |_| r.gen_range(-1.0..1.0));
            let direct = weights.cost(&y.view());
            let quadratic = y.t().dot(&m).dot(&y).diag().sum();
            assert!(
                (direct - quadratic).abs() <= 1e-10 * direct.max(1.0),
                "{:?}: {direct} vs {quadratic}",
                weights.algorithm()
            );
        }
    }
}

#[test]
fn constant_embeddings_cost_nothing() {
    let cloud = common::random_cloud(30, 3, 103);
    let index = NeighborhoodIndex::build_knn(&cloud, 8).unwrap();
    let mut constant = Array2::zeros((cloud.n(), 2));
    for mut row in constant.rows_mut() {
        row[0] = 3.25;
        row[1] = -1.5;
    }
    for weights in all_algorithm_weights(&cloud, &index) {
        let phi = weights.cost(&constant.view());
        assert!(phi < 1e-20, "{:?}: {phi}", weights.algorithm());
    }
}

#[test]
fn window_kernel_assembly_is_twice_the_graph_laplacian() {
    // On a symmetric neighbor graph the directed cost counts each edge in
    // both directions: M = 2 (D - W).
    let cloud = gen_grid(6, 3).unwrap();
    let index = NeighborhoodIndex::build_rball(&cloud, 1.0).unwrap();
    let weights = lem_weights(&cloud, &index, Kernel::Window).unwrap();
    let n = cloud.n();
    let m = assemble_quadratic(&weights, n);
    let mut laplacian = Array2::<f64>::zeros((n, n));
    for i in 0..n {
        laplacian[(i, i)] = index.neighbors(i).len() as f64;
        for &j in index.neighbors(i) {
            laplacian[(i, j)] -= 1.0;
        }
    }
    let mut max_diff = 0.0f64;
    for a in 0..n {
        for b in 0..n {
            max_diff = max_diff.max((m[(a, b)] - 2.0 * laplacian[(a, b)]).abs());
        }
    }
    assert!(max_diff < 1e-12, "max diff {max_diff}");
}

#[test]
fn degree_solver_trivial_eigenpair_and_path_graph_spectrum() {
    // Ten collinear points, window weights on the unit-distance graph.
    let n = 10;
    let mut pts = Array2::zeros((n, 2));
    for i in 0..n {
        pts[(i, 0)] = i as f64;
    }
    let cloud = PointCloud::new(pts).unwrap();
    let index = NeighborhoodIndex::build_rball(&cloud, 1.0).unwrap();
    let weights = lem_weights(&cloud, &index, Kernel::Window).unwrap();
    let m = assemble_quadratic(&weights, n);
    let degrees = weights.degrees().unwrap();
    let sol = solve_degree_constrained(&m.view(), degrees, 1).unwrap();

    // Trivial eigenvalue ~ 0.
    assert!(sol.eigenvalues[0].abs() < 1e-12);

    // Closed form: v_k(i) = cos(pi k i / (n-1)) solves the degree-weighted
    // problem with mu_k = 2 (1 - cos(pi k / (n-1))) for the assembled form.
    // Verify the closed form independently, then compare the solver output.
    let k = 1;
    let theta = std::f64::consts::PI * k as f64 / (n - 1) as f64;
    let v: Array1<f64> = Array1::from_shape_fn(n, |i| (theta * i as f64).cos());
    let mu = 2.0 * (1.0 - theta.cos());
    let mv = m.dot(&v);
    for i in 0..n {
        assert_abs_diff_eq!(mv[i], mu * degrees[i] * v[i], epsilon = 1e-10);
    }
    assert_abs_diff_eq!(sol.eigenvalues[1], mu, epsilon = 1e-10);

    // Output column equals the analytic eigenvector up to sign and scale.
    let out = sol.vectors.column(0).to_owned();
    let norm_out = out.dot(&out).sqrt();
    let norm_v = v.dot(&v).sqrt();
    let sign = out.dot(&v).signum();
    for i in 0..n {
        assert_abs_diff_eq!(out[i] / norm_out, sign * v[i] / norm_v, epsilon = 1e-6);
    }
}

#[test]
fn degree_solver_beats_random_feasible_candidates() {
    let cloud = gen_uniform_strip(3.0, 1.0, 150, 104).unwrap();
    let index = NeighborhoodIndex::build_knn(&cloud, 6).unwrap();
    let weights = lem_weights(&cloud, &index, Kernel::Window).unwrap();
    let m = assemble_quadratic(&weights, cloud.n());
    let degrees = weights.degrees().unwrap();
    let sol = solve_degree_constrained(&m.view(), degrees, 2).unwrap();
    let phi_opt = weights.cost(&sol.vectors.view());
    let mut r = common::rng(105);
    for _ in 0..100 {
        let candidate = common::random_degree_feasible(cloud.n(), degrees, &mut r);
        let phi = weights.cost(&candidate.view());
        assert!(phi_opt <= phi + 1e-8, "solver {phi_opt} vs candidate {phi}");
    }
    let (gram, mean) = common::degree_constraint_residuals(&sol.vectors.view(), degrees);
    assert!(gram < 1e-8 && mean < 1e-8);
}

#[test]
fn cov_solver_on_flat_input_annihilates_cost_and_recovers_affinely() {
    let cloud = gen_uniform_strip(2.0, 1.0, 400, 106).unwrap();
    let index = NeighborhoodIndex::build_knn(&cloud, 8).unwrap();
    let weights = ltsa_weights(&cloud, &index, 2).unwrap();
    let m = assemble_quadratic(&weights, cloud.n());
    let sol = solve_cov_constrained(&m.view(), 2).unwrap();
    let phi = weights.cost(&sol.vectors.view());
    assert!(phi < 1e-8 * cloud.n() as f64, "phi {phi}");
    let (cov, mean) = common::cov_constraint_residuals(&sol.vectors.view());
    assert!(cov < 1e-8 && mean < 1e-8, "cov {cov} mean {mean}");
    let resid =
        affine_alignment_residual(&cloud.points(), &sol.vectors.view()).unwrap();
    assert!(resid < 1e-6, "affine residual {resid}");
}

#[test]
fn cov_solver_cost_never_exceeds_the_latent_reference_on_the_swissroll() {
    let cloud = gen_swissroll(500, 1.0, 107).unwrap();
    let index = NeighborhoodIndex::build_knn(&cloud, 8).unwrap();
    let weights = ltsa_weights(&cloud, &index, 2).unwrap();
    let m = assemble_quadratic(&weights, cloud.n());
    let sol = solve_cov_constrained(&m.view(), 2).unwrap();
    let phi_solver = weights.cost(&sol.vectors.view());
    let canon = canonicalize_latent(&cloud.latent().unwrap()).unwrap();
    let y_latent = build_y(&canon);
    let phi_latent = weights.cost(&y_latent.view());
    assert!(
        phi_solver <= phi_latent + 1e-8,
        "solver {phi_solver} vs latent reference {phi_latent}"
    );
}

#[test]
fn dfm_transform_scales_columns_to_their_eigenvalues() {
    let mut r = common::rng(108);
    let y = Array2::from_shape_fn((50, 3), |_| r.gen_range(-1.0..1.0));
    let lambdas = [0.9, 0.5, 0.2];
    let out = dfm_output_transform(&y.view(), &lambdas).unwrap();
    for (p, col) in out.columns().into_iter().enumerate() {
        let norm = col.dot(&col).sqrt();
        assert_abs_diff_eq!(norm, lambdas[p], epsilon = 1e-12);
        // Same direction as the input column.
        let yc = y.column(p);
        let cos = col.dot(&yc) / (norm * yc.dot(&yc).sqrt());
        assert_abs_diff_eq!(cos, 1.0, epsilon = 1e-12);
    }
    // Zero eigenvalue collapses a column; the transform is invertible iff
    // every eigenvalue is nonzero.
    let out = dfm_output_transform(&y.view(), &[0.9, 0.0, 0.2]).unwrap();
    assert!(out.column(1).iter().all(|&v| v == 0.0));
}

#[test]
fn embed_ltsa_on_noiseless_strip_is_affine_in_the_input() {
    let cloud = gen_uniform_strip(1.0, 6.0, 600, 109).unwrap();
    let config = EmbedConfig::new(Algorithm::Ltsa, NeighborhoodMode::Knn { k: 8 }, 2);
    let result = embed(&cloud, &config).unwrap();
    let resid = affine_alignment_residual(&cloud.points(), &result.y.view()).unwrap();
    assert!(resid < 1e-4, "affine residual {resid}");
    assert!(result.scaled_y.is_some());
    let (gram, mean) = result.constraint_residuals(None);
    assert!(gram < 1e-8 && mean < 1e-8);
}

#[test]
fn embed_reports_disconnected_graphs() {
    let mut pts = Array2::zeros((8, 2));
    for i in 0..4 {
        pts[(i, 0)] = i as f64 * 0.1;
        pts[(i + 4, 0)] = 1000.0 + i as f64 * 0.1;
    }
    let cloud = PointCloud::new(pts).unwrap();
    let config = EmbedConfig::new(Algorithm::Lem, NeighborhoodMode::Knn { k: 1 }, 1);
    match embed(&cloud, &config) {
        Err(manifold_core::Error::Disconnected { components }) => assert!(components >= 2),
        other => panic!("expected disconnected error, got {other:?}"),
    }
}

#[test]
fn permutation_of_inputs_permutes_outputs() {
    let cloud = gen_uniform_strip(2.5, 1.0, 120, 110).unwrap();
    let config = EmbedConfig::new(Algorithm::Lem, NeighborhoodMode::Knn { k: 6 }, 2);
    let base = embed(&cloud, &config).unwrap();
    // A fixed permutation: rotate rows by 17.
    let n = cloud.n();
    let perm: Vec<usize> = (0..n).map(|i| (i + 17) % n).collect();
    let mut permuted_pts = Array2::zeros((n, 2));
    for (dst, &src) in perm.iter().enumerate() {
        permuted_pts.row_mut(dst).assign(&cloud.points().row(src));
    }
    let permuted = PointCloud::new(permuted_pts).unwrap();
    let result = embed(&permuted, &config).unwrap();
    assert!(!base.degenerate_cut);
    for (dst, &src) in perm.iter().enumerate() {
        for c in 0..2 {
            assert_abs_diff_eq!(result.y[(dst, c)], base.y[(src, c)], epsilon = 1e-7);
        }
    }
}

#[test]
fn flat_zero_cost_is_preserved_under_input_scaling() {
    let cloud = gen_uniform_strip(2.0, 1.0, 200, 111).unwrap();
    for scale in [0.1, 7.0] {
        let scaled_pts = &cloud.points() * scale;
        let scaled = PointCloud::new(scaled_pts.to_owned()).unwrap();
        let index = NeighborhoodIndex::build_knn(&scaled, 8).unwrap();
        for weights in [
            ltsa_weights(&scaled, &index, 2).unwrap(),
            lle_weights(&scaled, &index, LleRegularizer::None).unwrap(),
        ] {
            let m = assemble_quadratic(&weights, scaled.n());
            let sol = solve_cov_constrained(&m.view(), 2).unwrap();
            let phi = weights.cost(&sol.vectors.view());
            assert!(phi < 1e-8 * scaled.n() as f64, "scale {scale}: phi {phi}");
        }
    }
}

#[test]
fn embed_dfm_produces_the_transformed_embedding() {
    let cloud = gen_uniform_strip(3.0, 1.0, 150, 112).unwrap();
    let config = EmbedConfig::new(Algorithm::Dfm, NeighborhoodMode::Knn { k: 8 }, 2);
    let result = embed(&cloud, &config).unwrap();
    let transformed = result.dfm_embedding.as_ref().unwrap();
    // Markov eigenvalues lambda = 1 - mu/2 scale the unit-norm columns.
    for (p, col) in transformed.columns().into_iter().enumerate() {
        let lambda = 1.0 - result.eigenvalues[p + 1] / 2.0;
        let norm = col.dot(&col).sqrt();
        assert_abs_diff_eq!(norm, lambda.abs(), epsilon = 1e-10);
    }
}
