//! JSON file formats.
//!
//! Point sets are stored as `{"dim", "field", "points", "labels"?}` with
//! coordinates as exact strings (`"p/q"` or `"p/q+r/s*i"`). Lines, design
//! matrices, polynomials and traces use their serde representations.

use std::fs;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::config::PointSet;
use crate::design::DesignMatrix;
use crate::error::{Error, Result};
use crate::scalar::{FieldKind, Scalar};

#[derive(Serialize, Deserialize)]
struct PointSetFile {
    dim: usize,
    field: FieldKind,
    points: Vec<Vec<Scalar>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    labels: Option<Vec<String>>,
}

impl Serialize for PointSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        PointSetFile {
            dim: self.dim(),
            field: self.field(),
            points: self.points().to_vec(),
            labels: self.labels().map(<[String]>::to_vec),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for PointSet {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let file = PointSetFile::deserialize(deserializer)?;
        point_set_from_file(file).map_err(serde::de::Error::custom)
    }
}

fn point_set_from_file(file: PointSetFile) -> Result<PointSet> {
    let mut set = PointSet::new(file.dim, file.points)?;
    if file.field == FieldKind::Rational && set.field() == FieldKind::Gaussian {
        return Err(Error::Parse("field \"Q\" but a coordinate has an imaginary part".into()));
    }
    if let Some(labels) = file.labels {
        set = set.with_labels(labels)?;
    }
    Ok(set)
}

/// Sparse `(row, col, value)` dump of a design matrix.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DesignDump {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<(usize, usize, Scalar)>,
    pub tuples: Vec<Vec<usize>>,
}

impl From<&DesignMatrix> for DesignDump {
    fn from(a: &DesignMatrix) -> Self {
        DesignDump {
            rows: a.rows,
            cols: a.cols,
            entries: a.triplets(),
            tuples: a.cover.tuples().map(|(_, t)| t.clone()).collect(),
        }
    }
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    fs::write(path, to_json(value)?)?;
    Ok(())
}

pub fn read_points(path: &Path) -> Result<PointSet> {
    read_json(path)
}
