//! Synthetic dataset generators.
//!
//! Every generator is a pure function of its parameters and seed; the same
//! call produces the same cloud on every platform.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use ndarray::Array2;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::cloud::{CloudMeta, PointCloud};
use crate::error::{Error, Result};

fn rng_for(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn meta(name: &str, seed: Option<u64>, params: &[(&str, String)]) -> CloudMeta {
    CloudMeta {
        name: name.to_string(),
        seed,
        params: params
            .iter()
            .map(|(k, v)| (k.to_string(), v.clone()))
            .collect::<BTreeMap<_, _>>(),
    }
}

/// The integer lattice [-m, m] x [-q, q], row-major over (i, j).
///
/// The latent parameterization equals the points themselves.
pub fn gen_grid(m: u32, q: u32) -> Result<PointCloud> {
    if q == 0 {
        return Err(Error::InvalidParameter("grid requires q >= 1".into()));
    }
    if m < q {
        return Err(Error::InvalidParameter(format!(
            "grid requires m >= q (got m={m}, q={q}); swap the arguments"
        )));
    }
    let (mi, qi) = (m as i64, q as i64);
    let n = ((2 * mi + 1) * (2 * qi + 1)) as usize;
    let mut points = Array2::zeros((n, 2));
    let mut row = 0;
    for i in -mi..=mi {
        for j in -qi..=qi {
            points[(row, 0)] = i as f64;
            points[(row, 1)] = j as f64;
            row += 1;
        }
    }
    let latent = points.clone();
    Ok(PointCloud::new(points)?
        .with_latent(latent)?
        .with_meta(meta(
            "grid",
            None,
            &[("m", m.to_string()), ("q", q.to_string())],
        )))
}

/// n i.i.d. uniform points on [0, length] x [0, width].
pub fn gen_uniform_strip(length: f64, width: f64, n: usize, seed: u64) -> Result<PointCloud> {
    validate_strip(length, width, n)?;
    let mut rng = rng_for(seed);
    let mut points = Array2::zeros((n, 2));
    for mut row in points.rows_mut() {
        row[0] = rng.gen_range(0.0..length);
        row[1] = rng.gen_range(0.0..width);
    }
    let latent = points.clone();
    Ok(PointCloud::new(points)?
        .with_latent(latent)?
        .with_meta(meta(
            "strip",
            Some(seed),
            &[
                ("length", format!("{length}")),
                ("width", format!("{width}")),
                ("n", n.to_string()),
            ],
        )))
}

/// The uniform strip lifted to R^3 with independent N(0, noise_variance)
/// displacement on the third axis; the latent keeps the clean (x1, x2).
pub fn gen_noisy_strip(
    length: f64,
    width: f64,
    n: usize,
    noise_variance: f64,
    seed: u64,
) -> Result<PointCloud> {
    validate_strip(length, width, n)?;
    if noise_variance < 0.0 || !noise_variance.is_finite() {
        return Err(Error::InvalidParameter(
            "noise variance must be a finite non-negative number".into(),
        ));
    }
    let mut rng = rng_for(seed);
    let normal = Normal::new(0.0, noise_variance.sqrt())
        .map_err(|e| Error::InvalidParameter(e.to_string()))?;
    let mut points = Array2::zeros((n, 3));
    let mut latent = Array2::zeros((n, 2));
    for i in 0..n {
        let x = rng.gen_range(0.0..length);
        let y = rng.gen_range(0.0..width);
        let eps = if noise_variance == 0.0 {
            0.0
        } else {
            normal.sample(&mut rng)
        };
        points[(i, 0)] = x;
        points[(i, 1)] = y;
        points[(i, 2)] = eps;
        latent[(i, 0)] = x;
        latent[(i, 1)] = y;
    }
    Ok(PointCloud::new(points)?
        .with_latent(latent)?
        .with_meta(meta(
            "noisy-strip",
            Some(seed),
            &[
                ("length", format!("{length}")),
                ("width", format!("{width}")),
                ("n", n.to_string()),
                ("noise_variance", format!("{noise_variance}")),
            ],
        )))
}

fn validate_strip(length: f64, width: f64, n: usize) -> Result<()> {
    if !(length > 0.0) || !(width > 0.0) || !length.is_finite() || !width.is_finite() {
        return Err(Error::InvalidParameter(
            "strip length and width must be positive finite numbers".into(),
        ));
    }
    if n < 4 {
        return Err(Error::InvalidParameter("strip requires n >= 4".into()));
    }
    Ok(())
}

/// Shape constants for the swissroll spiral.
///
/// The spiral is c(t) = (t cos t, t sin t) reparameterized by arclength, so
/// the roll (arclength, height) -> R^3 is an exact local isometry of the
/// latent rectangle. Defaults follow the classic construction: t from 3pi/2
/// to 9pi/2 and heights on [0, 21].
#[derive(Clone, Copy, Debug)]
pub struct SwissrollShape {
    pub t_start: f64,
    pub t_end: f64,
    pub height: f64,
}

impl Default for SwissrollShape {
    fn default() -> Self {
        Self {
            t_start: 1.5 * PI,
            t_end: 4.5 * PI,
            height: 21.0,
        }
    }
}

fn spiral_arclength(t: f64) -> f64 {
    0.5 * (t * (1.0 + t * t).sqrt() + t.asinh())
}

fn spiral_param_at_arclength(s: f64) -> f64 {
    // Newton on arclength(t) = s; arclength' = sqrt(1 + t^2).
    let mut t = (2.0 * s).sqrt().max(1e-9);
    for _ in 0..64 {
        let f = spiral_arclength(t) - s;
        let step = f / (1.0 + t * t).sqrt();
        t -= step;
        if step.abs() < 1e-13 * t.abs().max(1.0) {
            break;
        }
    }
    t
}

/// Swissroll sample with the first latent dimension stretched before rolling.
pub fn gen_swissroll(n: usize, stretch_factor: f64, seed: u64) -> Result<PointCloud> {
    gen_swissroll_with(n, stretch_factor, seed, SwissrollShape::default())
}

pub fn gen_swissroll_with(
    n: usize,
    stretch_factor: f64,
    seed: u64,
    shape: SwissrollShape,
) -> Result<PointCloud> {
    if n < 4 {
        return Err(Error::InvalidParameter("swissroll requires n >= 4".into()));
    }
    if !(stretch_factor > 0.0) || !stretch_factor.is_finite() {
        return Err(Error::InvalidParameter(
            "stretch factor must be positive and finite".into(),
        ));
    }
    if !(shape.t_end > shape.t_start) || !(shape.t_start > 0.0) || !(shape.height > 0.0) {
        return Err(Error::InvalidParameter(
            "swissroll shape requires 0 < t_start < t_end and height > 0".into(),
        ));
    }
    let s0 = spiral_arclength(shape.t_start);
    let total = spiral_arclength(shape.t_end) - s0;
    let mut rng = rng_for(seed);
    let mut points = Array2::zeros((n, 3));
    let mut latent = Array2::zeros((n, 2));
    for i in 0..n {
        let arc = rng.gen_range(0.0..1.0) * total * stretch_factor;
        let h = rng.gen_range(0.0..shape.height);
        let t = spiral_param_at_arclength(s0 + arc);
        points[(i, 0)] = t * t.cos();
        points[(i, 1)] = h;
        points[(i, 2)] = t * t.sin();
        latent[(i, 0)] = arc;
        latent[(i, 1)] = h;
    }
    Ok(PointCloud::new(points)?
        .with_latent(latent)?
        .with_meta(meta(
            "swissroll",
            Some(seed),
            &[
                ("n", n.to_string()),
                ("stretch", format!("{stretch_factor}")),
            ],
        )))
}

/// Polar angle (from the north pole) at which the fishbowl cap is removed.
pub const FISHBOWL_CAP_ANGLE: f64 = PI / 6.0;

/// Uniform sample of the unit sphere minus a polar cap, first ambient
/// coordinate scaled by `stretch_factor`; latent is (azimuth, polar angle).
pub fn gen_fishbowl(n: usize, stretch_factor: f64, seed: u64) -> Result<PointCloud> {
    if n < 4 {
        return Err(Error::InvalidParameter("fishbowl requires n >= 4".into()));
    }
    if !(stretch_factor > 0.0) || !stretch_factor.is_finite() {
        return Err(Error::InvalidParameter(
            "stretch factor must be positive and finite".into(),
        ));
    }
    let cap_cos = FISHBOWL_CAP_ANGLE.cos();
    let mut rng = rng_for(seed);
    let mut points = Array2::zeros((n, 3));
    let mut latent = Array2::zeros((n, 2));
    for i in 0..n {
        // Uniform area measure: cos(polar) uniform on [-1, cos(cap)).
        let c = rng.gen_range(-1.0..cap_cos);
        let polar = c.acos();
        let azimuth = rng.gen_range(0.0..2.0 * PI);
        let sp = polar.sin();
        points[(i, 0)] = stretch_factor * sp * azimuth.cos();
        points[(i, 1)] = sp * azimuth.sin();
        points[(i, 2)] = c;
        latent[(i, 0)] = azimuth;
        latent[(i, 1)] = polar;
    }
    Ok(PointCloud::new(points)?
        .with_latent(latent)?
        .with_meta(meta(
            "fishbowl",
            Some(seed),
            &[
                ("n", n.to_string()),
                ("stretch", format!("{stretch_factor}")),
            ],
        )))
}
