//! Neighborhood graphs: K-nearest-neighbor and r-ball construction, radii,
//! membership counts, and connectivity.
//!
//! The neighbor relation is directed; connectivity is checked on the
//! symmetrized graph. Brute-force O(N^2) search is the reference
//! implementation and the contract any accelerated search must match.

use ndarray::ArrayView2;
use serde::{Deserialize, Serialize};

use crate::cloud::PointCloud;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum NeighborhoodMode {
    Knn { k: usize },
    RBall { radius: f64 },
}

/// Per-point ordered neighbor lists with radii and membership statistics.
#[derive(Clone, Debug, Serialize)]
pub struct NeighborhoodIndex {
    mode: NeighborhoodMode,
    neighbors: Vec<Vec<usize>>,
    radii: Vec<f64>,
    membership_max: usize,
}

fn dist_sq(points: &ArrayView2<f64>, a: usize, b: usize) -> f64 {
    let (ra, rb) = (points.row(a), points.row(b));
    ra.iter()
        .zip(rb.iter())
        .map(|(x, y)| (x - y) * (x - y))
        .sum()
}

impl NeighborhoodIndex {
    /// K nearest neighbors by Euclidean distance, ties broken by lower index.
    pub fn build_knn(cloud: &PointCloud, k: usize) -> Result<Self> {
        let n = cloud.n();
        if k == 0 || k > n - 1 {
            return Err(Error::InvalidParameter(format!(
                "k must satisfy 1 <= k <= N-1 (k={k}, N={n})"
            )));
        }
        let points = cloud.points();
        let mut neighbors = Vec::with_capacity(n);
        let mut scratch: Vec<(f64, usize)> = Vec::with_capacity(n - 1);
        for i in 0..n {
            scratch.clear();
            for j in 0..n {
                if j != i {
                    scratch.push((dist_sq(&points, i, j), j));
                }
            }
            scratch.sort_unstable_by(|a, b| {
                a.0.partial_cmp(&b.0)
                    .expect("finite distances")
                    .then(a.1.cmp(&b.1))
            });
            neighbors.push(scratch[..k].iter().map(|&(_, j)| j).collect());
        }
        Ok(Self::finish(cloud, NeighborhoodMode::Knn { k }, neighbors))
    }

    /// All points within Euclidean distance `radius` (inclusive).
    pub fn build_rball(cloud: &PointCloud, radius: f64) -> Result<Self> {
        if !(radius > 0.0) || !radius.is_finite() {
            return Err(Error::InvalidParameter(
                "r-ball radius must be positive and finite".into(),
            ));
        }
        let n = cloud.n();
        let points = cloud.points();
        let r_sq = radius * radius;
        let mut neighbors = Vec::with_capacity(n);
        for i in 0..n {
            let mut found: Vec<(f64, usize)> = (0..n)
                .filter(|&j| j != i)
                .map(|j| (dist_sq(&points, i, j), j))
                .filter(|&(d, _)| d <= r_sq)
                .collect();
            if found.is_empty() {
                return Err(Error::IsolatedPoint { index: i, radius });
            }
            found.sort_unstable_by(|a, b| {
                a.0.partial_cmp(&b.0)
                    .expect("finite distances")
                    .then(a.1.cmp(&b.1))
            });
            neighbors.push(found.into_iter().map(|(_, j)| j).collect());
        }
        Ok(Self::finish(
            cloud,
            NeighborhoodMode::RBall { radius },
            neighbors,
        ))
    }

    fn finish(cloud: &PointCloud, mode: NeighborhoodMode, neighbors: Vec<Vec<usize>>) -> Self {
        let points = cloud.points();
        let n = neighbors.len();
        // r(i) = max pairwise distance within {x_i} and its neighbors.
        let mut radii = Vec::with_capacity(n);
        for (i, nbrs) in neighbors.iter().enumerate() {
            let mut members = Vec::with_capacity(nbrs.len() + 1);
            members.push(i);
            members.extend_from_slice(nbrs);
            let mut max_sq = 0.0f64;
            for a in 0..members.len() {
                for b in (a + 1)..members.len() {
                    max_sq = max_sq.max(dist_sq(&points, members[a], members[b]));
                }
            }
            radii.push(max_sq.sqrt());
        }
        // Membership counts include the point's own neighborhood.
        let mut counts = vec![1usize; n];
        for nbrs in &neighbors {
            for &j in nbrs {
                counts[j] += 1;
            }
        }
        let membership_max = counts.into_iter().max().unwrap_or(1);
        Self {
            mode,
            neighbors,
            radii,
            membership_max,
        }
    }

    pub fn n(&self) -> usize {
        self.neighbors.len()
    }

    pub fn mode(&self) -> NeighborhoodMode {
        self.mode
    }

    pub fn neighbors(&self, i: usize) -> &[usize] {
        &self.neighbors[i]
    }

    pub fn radius(&self, i: usize) -> f64 {
        self.radii[i]
    }

    pub fn radii(&self) -> &[f64] {
        &self.radii
    }

    /// S, the maximum number of neighborhoods any single point belongs to.
    pub fn membership_max(&self) -> usize {
        self.membership_max
    }

    pub fn k_of(&self, i: usize) -> usize {
        self.neighbors[i].len()
    }

    pub fn k_max(&self) -> usize {
        self.neighbors.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn k_min(&self) -> usize {
        self.neighbors.iter().map(Vec::len).min().unwrap_or(0)
    }

    /// True iff the symmetrized neighbor graph has one connected component.
    pub fn is_connected(&self) -> bool {
        self.component_count() == 1
    }

    pub fn component_count(&self) -> usize {
        let n = self.n();
        let mut adjacency: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (i, nbrs) in self.neighbors.iter().enumerate() {
            for &j in nbrs {
                adjacency[i].push(j);
                adjacency[j].push(i);
            }
        }
        let mut seen = vec![false; n];
        let mut components = 0;
        let mut stack = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            components += 1;
            seen[start] = true;
            stack.push(start);
            while let Some(v) = stack.pop() {
                for &w in &adjacency[v] {
                    if !seen[w] {
                        seen[w] = true;
                        stack.push(w);
                    }
                }
            }
        }
        components
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::gen_grid;
    use crate::cloud::PointCloud;
    use approx::assert_abs_diff_eq;
    use ndarray::Array2;
    use rand::{Rng, SeedableRng};

    fn cloud_from(rows: Vec<[f64; 2]>) -> PointCloud {
        let n = rows.len();
        let flat: Vec<f64> = rows.into_iter().flatten().collect();
        PointCloud::new(Array2::from_shape_vec((n, 2), flat).unwrap()).unwrap()
    }

    #[test]
    fn knn_tie_breaks_toward_lower_index() {
        let cloud = cloud_from(vec![[0.0, 0.0], [1.0, 0.0], [2.0, 0.0]]);
        let index = NeighborhoodIndex::build_knn(&cloud, 1).unwrap();
        // The middle point is equidistant from both ends.
        assert_eq!(index.neighbors(1), &[0]);
    }

    #[test]
    fn knn_inner_grid_point_has_the_eight_lattice_offsets() {
        let cloud = gen_grid(40, 20).unwrap();
        let index = NeighborhoodIndex::build_knn(&cloud, 8).unwrap();
        let points = cloud.points();
        // Pick the exact center (i=0, j=0).
        let center = (0..cloud.n())
            .find(|&r| points[(r, 0)] == 0.0 && points[(r, 1)] == 0.0)
            .unwrap();
        let mut offsets: Vec<(i64, i64)> = index
            .neighbors(center)
            .iter()
            .map(|&j| {
                (
                    (points[(j, 0)] - points[(center, 0)]) as i64,
                    (points[(j, 1)] - points[(center, 1)]) as i64,
                )
            })
            .collect();
        offsets.sort();
        let mut expected = vec![
            (-1, -1),
            (-1, 0),
            (-1, 1),
            (0, -1),
            (0, 1),
            (1, -1),
            (1, 0),
            (1, 1),
        ];
        expected.sort();
        assert_eq!(offsets, expected);
        assert_abs_diff_eq!(index.radius(center), 8.0f64.sqrt(), epsilon = 1e-12);
    }

    #[test]
    fn knn_with_k_equal_n_minus_one_takes_everyone() {
        let cloud = cloud_from(vec![[0.0, 0.0], [1.0, 0.5], [2.0, -0.25], [0.5, 3.0]]);
        let index = NeighborhoodIndex::build_knn(&cloud, 3).unwrap();
        for i in 0..4 {
            let mut got: Vec<usize> = index.neighbors(i).to_vec();
            got.sort();
            let expected: Vec<usize> = (0..4).filter(|&j| j != i).collect();
            assert_eq!(got, expected);
        }
    }

    #[test]
    fn knn_rejects_out_of_range_k() {
        let cloud = cloud_from(vec![[0.0, 0.0], [1.0, 0.0]]);
        assert!(NeighborhoodIndex::build_knn(&cloud, 0).is_err());
        assert!(NeighborhoodIndex::build_knn(&cloud, 2).is_err());
    }

    #[test]
    fn rball_grid_counts() {
        let cloud = gen_grid(5, 3).unwrap();
        let points = cloud.points();
        let center = (0..cloud.n())
            .find(|&r| points[(r, 0)] == 0.0 && points[(r, 1)] == 0.0)
            .unwrap();
        let r1 = NeighborhoodIndex::build_rball(&cloud, 1.0).unwrap();
        assert_eq!(r1.k_of(center), 4);
        let r15 = NeighborhoodIndex::build_rball(&cloud, 1.5).unwrap();
        // Offsets with norm <= 1.5: the 4 axis and 4 diagonal neighbors.
        assert_eq!(r15.k_of(center), 8);
    }

    #[test]
    fn rball_isolated_point_error_names_the_point() {
        let cloud = gen_grid(2, 1).unwrap();
        match NeighborhoodIndex::build_rball(&cloud, 0.5) {
            Err(Error::IsolatedPoint { index, .. }) => assert_eq!(index, 0),
            other => panic!("expected isolated-point error, got {other:?}"),
        }
    }

    #[test]
    fn grid_knn_graph_is_connected_and_split_grids_are_not() {
        let cloud = gen_grid(40, 20).unwrap();
        let index = NeighborhoodIndex::build_knn(&cloud, 8).unwrap();
        assert!(index.is_connected());

        // Two copies of a small grid, far apart.
        let small = gen_grid(2, 2).unwrap();
        let mut rows: Vec<[f64; 2]> = small
            .points()
            .rows()
            .into_iter()
            .map(|r| [r[0], r[1]])
            .collect();
        let far: Vec<[f64; 2]> = rows.iter().map(|r| [r[0] + 1000.0, r[1]]).collect();
        rows.extend(far);
        let split = cloud_from(rows);
        let index = NeighborhoodIndex::build_knn(&split, 4).unwrap();
        assert!(!index.is_connected());
        assert_eq!(index.component_count(), 2);
    }

    #[test]
    fn grid_k4_membership_counts() {
        let cloud = gen_grid(10, 5).unwrap();
        let index = NeighborhoodIndex::build_knn(&cloud, 4).unwrap();
        // Brute-force membership count, including each point's own neighborhood.
        let n = cloud.n();
        let mut counts = vec![1usize; n];
        for i in 0..n {
            for &j in index.neighbors(i) {
                counts[j] += 1;
            }
        }
        assert_eq!(index.membership_max(), *counts.iter().max().unwrap());
        // Deep inner points live in the own + 4 axis-neighborhood regime.
        let points = cloud.points();
        for p in 0..n {
            let (i, j) = (points[(p, 0)], points[(p, 1)]);
            if i.abs() <= 8.0 && j.abs() <= 3.0 {
                assert_eq!(counts[p], 5, "inner point ({i}, {j})");
            }
        }
    }

    // Independent O(N^2) oracle for neighbor sets and radii.
    fn oracle_knn(points: &ArrayView2<f64>, k: usize) -> (Vec<Vec<usize>>, Vec<f64>) {
        let n = points.nrows();
        let dist = |a: usize, b: usize| -> f64 {
            points
                .row(a)
                .iter()
                .zip(points.row(b).iter())
                .map(|(x, y)| (x - y) * (x - y))
                .sum::<f64>()
                .sqrt()
        };
        let mut neighbors = Vec::new();
        let mut radii = Vec::new();
        for i in 0..n {
            let mut all: Vec<usize> = (0..n).filter(|&j| j != i).collect();
            all.sort_by(|&a, &b| {
                dist(i, a)
                    .partial_cmp(&dist(i, b))
                    .unwrap()
                    .then(a.cmp(&b))
            });
            let sel: Vec<usize> = all[..k].to_vec();
            let mut members = sel.clone();
            members.push(i);
            let mut r = 0.0f64;
            for a in 0..members.len() {
                for b in 0..members.len() {
                    r = r.max(dist(members[a], members[b]));
                }
            }
            neighbors.push(sel);
            radii.push(r);
        }
        (neighbors, radii)
    }

    #[test]
    fn knn_matches_brute_force_oracle_on_random_clouds() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(99);
        for trial in 0..5 {
            let n = 60 + trial * 37;
            let d = 2 + trial % 3;
            let flat: Vec<f64> = (0..n * d).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let cloud =
                PointCloud::new(Array2::from_shape_vec((n, d), flat).unwrap()).unwrap();
            let k = 3 + trial;
            let index = NeighborhoodIndex::build_knn(&cloud, k).unwrap();
            let (nbrs, radii) = oracle_knn(&cloud.points(), k);
            for i in 0..n {
                assert_eq!(index.neighbors(i), &nbrs[i][..], "point {i}");
                assert_abs_diff_eq!(index.radius(i), radii[i], epsilon = 1e-12);
            }
        }
    }
}
