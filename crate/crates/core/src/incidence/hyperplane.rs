use std::collections::HashSet;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::line::pivot_normalize;
use crate::config::PointSet;
use crate::error::{Error, Result};
use crate::linalg::{dot, ExactMatrix};
use crate::scalar::Scalar;

/// Affine hyperplane `⟨x, normal⟩ = offset` with a pivot-normalized normal.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Hyperplane {
    normal: Vec<Scalar>,
    offset: Scalar,
}

impl Hyperplane {
    pub fn new(mut normal: Vec<Scalar>, offset: Scalar) -> Result<Hyperplane> {
        let Some(pivot) = normal.iter().position(|x| !x.is_zero()) else {
            return Err(Error::ZeroNormal);
        };
        let scale = normal[pivot].clone();
        pivot_normalize(&mut normal);
        Ok(Hyperplane {
            normal,
            offset: &offset / &scale,
        })
    }

    /// The hyperplane with the given normal passing through `p`.
    pub fn through(normal: Vec<Scalar>, p: &[Scalar]) -> Result<Hyperplane> {
        let offset = dot(&normal, p);
        Hyperplane::new(normal, offset)
    }

    /// Coordinate hyperplane `x_axis = value`.
    pub fn coordinate(dim: usize, axis: usize, value: Scalar) -> Hyperplane {
        let mut normal = vec![Scalar::zero(); dim];
        normal[axis] = num_traits::One::one();
        Hyperplane {
            normal,
            offset: value,
        }
    }

    pub fn normal(&self) -> &[Scalar] {
        &self.normal
    }

    pub fn offset(&self) -> &Scalar {
        &self.offset
    }

    pub fn dim(&self) -> usize {
        self.normal.len()
    }

    pub fn contains(&self, x: &[Scalar]) -> bool {
        x.len() == self.dim() && dot(&self.normal, x) == self.offset
    }

    /// Indices of the points of `v` lying on the hyperplane.
    pub fn members(&self, v: &PointSet) -> Vec<usize> {
        (0..v.len()).filter(|&i| self.contains(v.point(i))).collect()
    }

    /// `true` when the whole line lies in the hyperplane.
    pub fn contains_line(&self, line: &super::Line) -> bool {
        self.contains(line.base()) && dot(&self.normal, line.dir()).is_zero()
    }
}

/// Calls `f` on every `k`-subset of `0..n` in lexicographic order.
pub(crate) fn for_each_combination(n: usize, k: usize, mut f: impl FnMut(&[usize])) {
    if k > n {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        f(&idx);
        // rightmost position that can still advance
        let mut i = k;
        while i > 0 && idx[i - 1] == n - k + i - 1 {
            i -= 1;
        }
        if i == 0 {
            return;
        }
        idx[i - 1] += 1;
        for j in i..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Unique hyperplane through `d` affinely independent points, `None` if they
/// are affinely dependent.
pub fn hyperplane_through(points: &[&[Scalar]]) -> Option<Hyperplane> {
    let d = points.first()?.len();
    if points.len() != d {
        return None;
    }
    let p0 = points[0];
    let rows: Vec<Vec<Scalar>> = points[1..]
        .iter()
        .map(|p| p.iter().zip(p0).map(|(a, b)| a - b).collect())
        .collect();
    let m = ExactMatrix::from_rows(d, rows).ok()?;
    let ns = m.nullspace();
    if ns.len() != 1 {
        return None;
    }
    Hyperplane::through(ns.into_iter().next()?, p0).ok()
}

/// A hyperplane containing every point of `v` when the affine hull of `v` is
/// not all of the space.
fn containing_hyperplane(v: &PointSet) -> Option<Hyperplane> {
    let d = v.dim();
    let Some(p0) = v.points().first() else {
        return Some(Hyperplane::coordinate(d, 0, Scalar::zero()));
    };
    let rows: Vec<Vec<Scalar>> = v.points()[1..]
        .iter()
        .map(|p| p.iter().zip(p0).map(|(a, b)| a - b).collect())
        .collect();
    let m = ExactMatrix::from_rows(d, rows).ok()?;
    let ns = m.nullspace();
    let h = ns.into_iter().next()?;
    Hyperplane::through(h, p0).ok()
}

/// Maximum number of points of `v` on one hyperplane (`s_{d-1}`) with a
/// witness. Exhaustive over affinely independent `d`-subsets; ties go to the
/// lexicographically first subset.
pub fn max_hyperplane_subset(v: &PointSet) -> (usize, Hyperplane) {
    if let Some(h) = containing_hyperplane(v) {
        return (v.len(), h);
    }
    let d = v.dim();
    let mut seen: HashSet<Hyperplane> = HashSet::new();
    let mut best: Option<(usize, Hyperplane)> = None;
    for_each_combination(v.len(), d, |idx| {
        let pts: Vec<&[Scalar]> = idx.iter().map(|&i| v.point(i)).collect();
        let Some(h) = hyperplane_through(&pts) else {
            return;
        };
        if !seen.insert(h.clone()) {
            return;
        }
        let count = v.points().iter().filter(|p| h.contains(p)).count();
        if best.as_ref().is_none_or(|(c, _)| count > *c) {
            best = Some((count, h));
        }
    });
    best.expect("full-dimensional set has an independent d-subset")
}
