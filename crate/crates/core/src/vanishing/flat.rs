//! Flat points and joints of a line family on which a polynomial vanishes.

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::poly::vanishes_on_line;
use crate::config::PointSet;
use crate::error::{Error, Result};
use crate::incidence::{Hyperplane, Line};
use crate::linalg::ExactMatrix;
use crate::scalar::Scalar;
use crate::veronese::Polynomial;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum PointKind {
    /// The incident line directions span at most `d - 1` dimensions; the
    /// hyperplane through the point with this normal contains all of them.
    Flat { normal: Vec<Scalar> },
    Joint,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointClass {
    pub point: usize,
    /// Indices into the line family of the lines through the point.
    pub lines: Vec<usize>,
    pub direction_rank: usize,
    pub kind: PointKind,
    pub gradient: Vec<Scalar>,
}

impl PointClass {
    pub fn is_flat(&self) -> bool {
        matches!(self.kind, PointKind::Flat { .. })
    }

    /// Witness hyperplane through the point, for flat points.
    pub fn witness(&self, v: &PointSet) -> Option<Hyperplane> {
        match &self.kind {
            PointKind::Flat { normal } => Hyperplane::through(normal.clone(), v.point(self.point)).ok(),
            PointKind::Joint => None,
        }
    }
}

/// Lines of `lines` on which `f` vanishes identically.
pub fn lines_in_zero_set(f: &Polynomial, lines: &[Line]) -> Vec<usize> {
    (0..lines.len()).filter(|&i| vanishes_on_line(f, &lines[i])).collect()
}

/// Classifies every point of `v` by the span of the directions of the lines
/// of `lines` through it. Each line must lie in the zero set of `f`; at every
/// joint the gradient of `f` is checked to vanish.
pub fn classify_flat_points(v: &PointSet, lines: &[Line], f: &Polynomial) -> Result<Vec<PointClass>> {
    let d = v.dim();
    let mut through: Vec<Vec<usize>> = vec![Vec::new(); v.len()];
    for (li, line) in lines.iter().enumerate() {
        if !vanishes_on_line(f, line) {
            return Err(Error::NotVanishingOnLine(li));
        }
        for &p in line.incident() {
            through[p].push(li);
        }
    }
    let mut out = Vec::with_capacity(v.len());
    for (p, ls) in through.into_iter().enumerate() {
        let dirs: Vec<Vec<Scalar>> = ls.iter().map(|&l| lines[l].dir().to_vec()).collect();
        let m = ExactMatrix::from_rows(d, dirs)?;
        let rank = m.rank();
        let gradient = f.gradient_at(v.point(p));
        let kind = if rank < d {
            let normal = m.nullspace().into_iter().next().expect("rank below dimension");
            PointKind::Flat { normal }
        } else {
            if !gradient.iter().all(Zero::is_zero) {
                return Err(Error::Invariant(format!("gradient is nonzero at joint {p}")));
            }
            PointKind::Joint
        };
        out.push(PointClass {
            point: p,
            lines: ls,
            direction_rank: rank,
            kind,
            gradient,
        });
    }
    Ok(out)
}
