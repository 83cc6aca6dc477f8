//! Canonical lines, rich-line enumeration, incidence graphs, progressions and
//! hyperplane statistics.

mod ap;
mod hyperplane;
mod line;
pub mod oracle;

use std::collections::HashMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use ap::{count_aps, is_sign_canonical, lift_progressions, APRecord};
pub use hyperplane::{hyperplane_through, max_hyperplane_subset, Hyperplane};
pub use line::{canonical_line, Line};
pub(crate) use line::direction;

use crate::config::PointSet;
use crate::error::{Error, Result};

/// All lines containing at least `r` points of `v`, with full incident lists.
///
/// For each point `i` the other points are grouped by canonical direction;
/// a group is reported from `i` only when `i` is the smallest index on the
/// line, so every line is produced exactly once. Output is sorted by incident
/// list.
pub fn rich_lines(v: &PointSet, r: usize) -> Result<Vec<Line>> {
    if r < 2 {
        return Err(Error::InvalidParameter("rich lines need r >= 2".into()));
    }
    if v.len() < r {
        return Ok(Vec::new());
    }
    let mut lines: Vec<Line> = (0..v.len())
        .into_par_iter()
        .flat_map_iter(|i| {
            let p = v.point(i);
            let mut groups: HashMap<Vec<_>, Vec<usize>> = HashMap::new();
            for (j, q) in v.points().iter().enumerate() {
                if j == i {
                    continue;
                }
                let dir = direction(p, q).expect("points are distinct");
                groups.entry(dir).or_default().push(j);
            }
            groups
                .into_iter()
                .filter(|(_, js)| js.len() + 1 >= r && js[0] > i)
                .map(|(dir, js)| {
                    let mut incident = Vec::with_capacity(js.len() + 1);
                    incident.push(i);
                    incident.extend(js);
                    Line::with_direction(p, dir, incident)
                })
                .collect::<Vec<_>>()
        })
        .collect();
    lines.sort_by(|a, b| a.incident().cmp(b.incident()));
    Ok(lines)
}

/// Bipartite point–line incidence graph. `left` holds point indices, `right`
/// line indices and every edge `(point, line)` is an exact incidence.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct IncidenceGraph {
    pub left: Vec<usize>,
    pub right: Vec<usize>,
    pub edges: Vec<(usize, usize)>,
}

impl IncidenceGraph {
    pub fn new(left: Vec<usize>, right: Vec<usize>, edges: Vec<(usize, usize)>) -> Self {
        IncidenceGraph { left, right, edges }
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// Degree of every left vertex, keyed by vertex id.
    pub fn left_degrees(&self) -> HashMap<usize, usize> {
        let mut deg: HashMap<usize, usize> = self.left.iter().map(|&a| (a, 0)).collect();
        for (a, _) in &self.edges {
            *deg.entry(*a).or_default() += 1;
        }
        deg
    }

    pub fn right_degrees(&self) -> HashMap<usize, usize> {
        let mut deg: HashMap<usize, usize> = self.right.iter().map(|&b| (b, 0)).collect();
        for (_, b) in &self.edges {
            *deg.entry(*b).or_default() += 1;
        }
        deg
    }
}

/// Incidences between all points of `v` and `lines`. Every recorded incident
/// index is checked exactly against its line.
pub fn incidences(v: &PointSet, lines: &[Line]) -> Result<IncidenceGraph> {
    let mut edges = Vec::new();
    for (li, line) in lines.iter().enumerate() {
        for &p in line.incident() {
            if p >= v.len() {
                return Err(Error::InvalidParameter(format!(
                    "line {li} references point {p} outside the set"
                )));
            }
            if !line.contains(v.point(p)) {
                return Err(Error::Invariant(format!("point {p} is not on line {li}")));
            }
            edges.push((p, li));
        }
    }
    Ok(IncidenceGraph::new(
        (0..v.len()).collect(),
        (0..lines.len()).collect(),
        edges,
    ))
}

/// Number of lines in `lines` through each point of `v`.
pub fn line_degrees(n: usize, lines: &[Line]) -> Vec<usize> {
    let mut deg = vec![0; n];
    for l in lines {
        for &p in l.incident() {
            deg[p] += 1;
        }
    }
    deg
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::grid;
    use crate::scalar::Scalar;

    #[test]
    fn grid_rich_lines() {
        let g = grid(2, 3).unwrap();
        let lines = rich_lines(&g, 3).unwrap();
        assert_eq!(lines.len(), 8);
        assert!(lines.iter().all(|l| l.len() == 3));
        let graph = incidences(&g, &lines).unwrap();
        assert_eq!(graph.len(), 24);
    }

    #[test]
    fn collinear_and_generic() {
        let pts = PointSet::new(
            2,
            (0..7).map(|t| vec![Scalar::from_int(t), Scalar::from_int(2 * t + 1)]).collect(),
        )
        .unwrap();
        for r in 2..=7 {
            assert_eq!(rich_lines(&pts, r).unwrap().len(), 1);
        }
        assert!(rich_lines(&pts, 8).unwrap().is_empty());
        let tri = PointSet::from_i64(2, &[&[0, 0], &[1, 0], &[0, 1]]).unwrap();
        assert!(rich_lines(&tri, 3).unwrap().is_empty());
        assert_eq!(rich_lines(&tri, 2).unwrap().len(), 3);
        assert!(rich_lines(&tri, 1).is_err());
    }

    #[test]
    fn incidence_edge_cases() {
        let g = grid(2, 3).unwrap();
        assert!(incidences(&g, &[]).unwrap().is_empty());
        let lines = rich_lines(&g, 3).unwrap();
        let one = incidences(&g, &lines[..1]).unwrap();
        assert_eq!(one.len(), lines[0].len());
        let bad = lines[0].clone().with_incident(vec![0, 1, 99]);
        assert!(incidences(&g, &[bad]).is_err());
    }

    #[test]
    fn pasted_grids_double_the_planar_count() {
        let single = rich_lines(&grid(2, 3).unwrap(), 3).unwrap().len();
        let pasted = crate::config::pasted_grids(3, 2, 2, 3).unwrap();
        assert_eq!(rich_lines(&pasted, 3).unwrap().len(), 2 * single);
    }
}
