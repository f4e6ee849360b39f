//! JSON point-set files and TSV edge lists.
//!
//! Coordinates are serialized as shortest round-tripping decimals, so a
//! written file re-reads to bit-identical values. Writes go through a
//! temporary file plus rename.

use std::fmt;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::pairs::{PairGraph, PointSet};

#[derive(Debug)]
pub enum IoError {
    Io(std::io::Error),
    Json(serde_json::Error),
    Invalid(String),
}

impl fmt::Display for IoError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IoError::Io(e) => write!(f, "{e}"),
            IoError::Json(e) => write!(f, "{e}"),
            IoError::Invalid(msg) => write!(f, "invalid point-set file: {msg}"),
        }
    }
}

impl std::error::Error for IoError {}

impl From<std::io::Error> for IoError {
    fn from(e: std::io::Error) -> Self {
        IoError::Io(e)
    }
}

impl From<serde_json::Error> for IoError {
    fn from(e: serde_json::Error) -> Self {
        IoError::Json(e)
    }
}

/// On-disk form of a point set, with optional classes and provenance.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct PointSetFile {
    pub dim: usize,
    pub points: Vec<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub classes: Option<Vec<Vec<usize>>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub provenance: Option<serde_json::Value>,
}

impl PointSetFile {
    pub fn new(dim: usize, points: Vec<Vec<f64>>) -> Self {
        PointSetFile { dim, points, classes: None, provenance: None }
    }

    pub fn from_point_set(set: &PointSet) -> Self {
        PointSetFile::new(
            set.dim(),
            set.points().iter().map(|p| p.coords.clone()).collect(),
        )
    }

    /// Structural checks: row lengths, finiteness, class indices valid and
    /// pairwise disjoint.
    pub fn validate(&self) -> Result<(), IoError> {
        for (i, row) in self.points.iter().enumerate() {
            if row.len() != self.dim {
                return Err(IoError::Invalid(format!(
                    "point {i} has {} coordinates, dim is {}",
                    row.len(),
                    self.dim
                )));
            }
            if row.iter().any(|c| !c.is_finite()) {
                return Err(IoError::Invalid(format!("point {i} has a non-finite coordinate")));
            }
        }
        if let Some(classes) = &self.classes {
            let mut seen = vec![false; self.points.len()];
            for (ci, class) in classes.iter().enumerate() {
                for &idx in class {
                    if idx >= self.points.len() {
                        return Err(IoError::Invalid(format!(
                            "class {ci} references point {idx} out of range"
                        )));
                    }
                    if seen[idx] {
                        return Err(IoError::Invalid(format!(
                            "point {idx} appears in two classes"
                        )));
                    }
                    seen[idx] = true;
                }
            }
        }
        Ok(())
    }

    pub fn to_point_set(&self) -> Result<PointSet, IoError> {
        self.validate()?;
        PointSet::new(
            self.dim,
            self.points.iter().map(|r| crate::geom::Point::new(r.clone())).collect(),
        )
        .map_err(|e| IoError::Invalid(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self, IoError> {
        let text = fs::read_to_string(path)?;
        let file: PointSetFile = serde_json::from_str(&text)?;
        file.validate()?;
        Ok(file)
    }

    /// Serializes to pretty JSON and renames a temporary sibling into place.
    pub fn save_atomic(&self, path: &Path) -> Result<(), IoError> {
        let text = serde_json::to_string_pretty(self)?;
        write_atomic(path, text.as_bytes())
    }
}

pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), IoError> {
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = std::path::PathBuf::from(tmp);
    fs::write(&tmp, bytes)?;
    fs::rename(&tmp, path)?;
    Ok(())
}

/// Writes the edge list as TSV lines `i<TAB>j<TAB>{DN|STRICT}`.
pub fn write_edges_tsv(path: &Path, graph: &PairGraph) -> Result<(), IoError> {
    write_atomic(path, graph.edges_tsv().as_bytes())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_is_bit_identical() {
        let dir = std::env::temp_dir().join("dnormal-io-test");
        fs::create_dir_all(&dir).unwrap();
        let path = dir.join("set.json");
        let file = PointSetFile {
            dim: 3,
            points: vec![
                vec![0.1 + 0.2, -1.0 / 3.0, 2.0f64.sqrt()],
                vec![1e-300, 1e300, -0.0],
            ],
            classes: Some(vec![vec![0], vec![1]]),
            provenance: Some(serde_json::json!({"kind": "test"})),
        };
        file.save_atomic(&path).unwrap();
        let back = PointSetFile::load(&path).unwrap();
        for (a, b) in file.points.iter().flatten().zip(back.points.iter().flatten()) {
            assert_eq!(a.to_bits(), b.to_bits());
        }
        assert_eq!(file, back);
        fs::remove_file(&path).unwrap();
    }

    #[test]
    fn validation_catches_broken_files() {
        let bad_dim = PointSetFile::new(2, vec![vec![0.0, 1.0], vec![1.0]]);
        assert!(bad_dim.validate().is_err());
        let mut overlapping = PointSetFile::new(1, vec![vec![0.0], vec![1.0]]);
        overlapping.classes = Some(vec![vec![0, 1], vec![1]]);
        assert!(overlapping.validate().is_err());
        let mut out_of_range = PointSetFile::new(1, vec![vec![0.0]]);
        out_of_range.classes = Some(vec![vec![3]]);
        assert!(out_of_range.validate().is_err());
    }
}
