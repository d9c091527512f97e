//! Point clouds and their CSV interchange format.
//!
//! The CSV format is plain comma-separated numbers, one point per row, with an
//! optional `# key=value` comment header carrying metadata. Floats are written
//! with 17 significant digits so a save/load round trip reproduces every f64
//! bit-exactly.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use ndarray::{Array2, ArrayView2};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Metadata attached to a generated or loaded cloud.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct CloudMeta {
    pub name: String,
    pub seed: Option<u64>,
    pub params: BTreeMap<String, String>,
}

/// An N x D set of input points, optionally paired with the N x d latent
/// parameterization it was generated from.
#[derive(Clone, Debug)]
pub struct PointCloud {
    points: Array2<f64>,
    latent: Option<Array2<f64>>,
    meta: CloudMeta,
}

impl PointCloud {
    pub fn new(points: Array2<f64>) -> Result<Self> {
        if points.nrows() == 0 || points.ncols() == 0 {
            return Err(Error::InvalidParameter(
                "point cloud must have at least one point and one coordinate".into(),
            ));
        }
        if points.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter(
                "point cloud contains non-finite entries".into(),
            ));
        }
        Ok(Self {
            points,
            latent: None,
            meta: CloudMeta::default(),
        })
    }

    pub fn with_latent(mut self, latent: Array2<f64>) -> Result<Self> {
        if latent.nrows() != self.points.nrows() {
            return Err(Error::InvalidParameter(format!(
                "latent has {} rows, points have {}",
                latent.nrows(),
                self.points.nrows()
            )));
        }
        if latent.ncols() > self.points.ncols() {
            return Err(Error::InvalidParameter(
                "latent dimension exceeds ambient dimension".into(),
            ));
        }
        if latent.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter(
                "latent contains non-finite entries".into(),
            ));
        }
        self.latent = Some(latent);
        Ok(self)
    }

    pub fn with_meta(mut self, meta: CloudMeta) -> Self {
        self.meta = meta;
        self
    }

    pub fn n(&self) -> usize {
        self.points.nrows()
    }

    pub fn dim(&self) -> usize {
        self.points.ncols()
    }

    pub fn points(&self) -> ArrayView2<'_, f64> {
        self.points.view()
    }

    pub fn latent(&self) -> Option<ArrayView2<'_, f64>> {
        self.latent.as_ref().map(|l| l.view())
    }

    /// The latent parameterization when present, otherwise the points
    /// themselves (the D = d case).
    pub fn latent_or_points(&self) -> ArrayView2<'_, f64> {
        self.latent
            .as_ref()
            .map(|l| l.view())
            .unwrap_or_else(|| self.points.view())
    }

    pub fn meta(&self) -> &CloudMeta {
        &self.meta
    }

    pub fn to_csv_string(&self) -> String {
        let mut out = String::new();
        if !self.meta.name.is_empty() {
            let _ = writeln!(out, "# name={}", self.meta.name);
        }
        if let Some(seed) = self.meta.seed {
            let _ = writeln!(out, "# seed={seed}");
        }
        for (key, value) in &self.meta.params {
            let _ = writeln!(out, "# {key}={value}");
        }
        out.push_str(&matrix_to_csv(&self.points.view()));
        out
    }

    pub fn save_csv<P: AsRef<Path>>(&self, path: P) -> Result<()> {
        std::fs::write(path, self.to_csv_string())?;
        Ok(())
    }

    pub fn from_csv_str(text: &str) -> Result<Self> {
        let (matrix, meta) = parse_csv(text)?;
        Ok(Self {
            points: matrix,
            latent: None,
            meta,
        })
    }

    pub fn load_csv<P: AsRef<Path>>(path: P) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_csv_str(&text)
    }
}

/// Format one f64 with 17 significant digits (exact round trip).
pub fn format_f64(v: f64) -> String {
    format!("{v:.16e}")
}

/// Serialize a matrix to CSV rows without any header.
pub fn matrix_to_csv(mat: &ArrayView2<f64>) -> String {
    let mut out = String::new();
    for row in mat.rows() {
        let mut first = true;
        for v in row.iter() {
            if !first {
                out.push(',');
            }
            out.push_str(&format_f64(*v));
            first = false;
        }
        out.push('\n');
    }
    out
}

/// Write a bare numeric matrix as CSV.
pub fn save_matrix_csv<P: AsRef<Path>>(mat: &ArrayView2<f64>, path: P) -> Result<()> {
    std::fs::write(path, matrix_to_csv(mat))?;
    Ok(())
}

/// Read a bare numeric matrix from CSV (comment lines allowed).
pub fn load_matrix_csv<P: AsRef<Path>>(path: P) -> Result<Array2<f64>> {
    let text = std::fs::read_to_string(path)?;
    let (matrix, _) = parse_csv(&text)?;
    Ok(matrix)
}

fn parse_csv(text: &str) -> Result<(Array2<f64>, CloudMeta)> {
    let mut meta = CloudMeta::default();
    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut width = None;
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(comment) = line.strip_prefix('#') {
            if let Some((key, value)) = comment.split_once('=') {
                let key = key.trim();
                let value = value.trim();
                match key {
                    "name" => meta.name = value.to_string(),
                    "seed" => meta.seed = value.parse().ok(),
                    _ => {
                        meta.params.insert(key.to_string(), value.to_string());
                    }
                }
            }
            continue;
        }
        let mut row = Vec::new();
        for field in line.split(',') {
            let v: f64 = field.trim().parse().map_err(|_| Error::CsvParse {
                line: lineno + 1,
                message: format!("non-numeric field {:?}", field.trim()),
            })?;
            row.push(v);
        }
        match width {
            None => width = Some(row.len()),
            Some(w) if w != row.len() => {
                return Err(Error::CsvParse {
                    line: lineno + 1,
                    message: format!("ragged row: expected {w} fields, found {}", row.len()),
                });
            }
            _ => {}
        }
        rows.push(row);
    }
    let width = width.ok_or(Error::CsvParse {
        line: 0,
        message: "empty file".into(),
    })?;
    let flat: Vec<f64> = rows.iter().flatten().copied().collect();
    let matrix = Array2::from_shape_vec((rows.len(), width), flat)
        .expect("row widths validated during parsing");
    Ok((matrix, meta))
}
