use std::hash::{Hash, Hasher};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// An affine line in canonical form.
///
/// `dir` has its first nonzero coordinate (the pivot) equal to 1 and `base`
/// is the unique point of the line whose pivot coordinate is 0. Equality and
/// hashing use `(dir, base)` only; `incident` carries the indices of the
/// configuration points on the line, sorted.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Line {
    dir: Vec<Scalar>,
    base: Vec<Scalar>,
    #[serde(rename = "points")]
    incident: Vec<usize>,
}

impl PartialEq for Line {
    fn eq(&self, other: &Self) -> bool {
        self.dir == other.dir && self.base == other.base
    }
}

impl Eq for Line {}

impl Hash for Line {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.dir.hash(state);
        self.base.hash(state);
    }
}

/// Scales a nonzero vector so its first nonzero coordinate is 1. Returns the
/// pivot index.
pub(crate) fn pivot_normalize(v: &mut [Scalar]) -> Option<usize> {
    let pivot = v.iter().position(|x| !x.is_zero())?;
    if !v[pivot].is_one() {
        let inv = v[pivot].inv().expect("nonzero pivot");
        for x in v[pivot..].iter_mut() {
            if !x.is_zero() {
                *x = &*x * &inv;
            }
        }
    }
    Some(pivot)
}

/// Canonical direction of `q - p`, or `None` when the points coincide.
pub(crate) fn direction(p: &[Scalar], q: &[Scalar]) -> Option<Vec<Scalar>> {
    let mut v: Vec<Scalar> = q.iter().zip(p).map(|(a, b)| a - b).collect();
    pivot_normalize(&mut v).map(|_| v)
}

impl Line {
    /// The line through `p` and `q`. Symmetric in its arguments.
    pub fn through(p: &[Scalar], q: &[Scalar]) -> Result<Line> {
        if p.len() != q.len() {
            return Err(Error::Dimension {
                expected: p.len(),
                found: q.len(),
            });
        }
        let dir = direction(p, q).ok_or(Error::IdenticalPoints)?;
        Ok(Line::with_direction(p, dir, Vec::new()))
    }

    /// The line through `p` with an already pivot-normalized direction.
    pub(crate) fn with_direction(p: &[Scalar], dir: Vec<Scalar>, incident: Vec<usize>) -> Line {
        let pivot = dir.iter().position(|x| !x.is_zero()).expect("nonzero direction");
        let t = &p[pivot];
        let base = p
            .iter()
            .zip(&dir)
            .map(|(x, v)| if v.is_zero() { x.clone() } else { x - &(t * v) })
            .collect();
        Line { dir, base, incident }
    }

    /// Builds a line from a direction (normalized here) and any point on it.
    pub fn from_parts(mut dir: Vec<Scalar>, point: Vec<Scalar>, incident: Vec<usize>) -> Line {
        pivot_normalize(&mut dir).expect("zero direction");
        Line::with_direction(&point, dir, incident)
    }

    pub fn dir(&self) -> &[Scalar] {
        &self.dir
    }

    pub fn base(&self) -> &[Scalar] {
        &self.base
    }

    pub fn incident(&self) -> &[usize] {
        &self.incident
    }

    pub fn dim(&self) -> usize {
        self.dir.len()
    }

    pub fn pivot(&self) -> usize {
        self.dir.iter().position(|x| !x.is_zero()).expect("nonzero direction")
    }

    pub fn with_incident(mut self, incident: Vec<usize>) -> Line {
        self.incident = incident;
        self
    }

    /// `base + t·dir`.
    pub fn point_at(&self, t: &Scalar) -> Vec<Scalar> {
        self.base
            .iter()
            .zip(&self.dir)
            .map(|(b, v)| if v.is_zero() { b.clone() } else { b + &(t * v) })
            .collect()
    }

    /// The parameter of a point on the line: its pivot coordinate.
    pub fn parameter(&self, p: &[Scalar]) -> Scalar {
        p[self.pivot()].clone()
    }

    pub fn contains(&self, p: &[Scalar]) -> bool {
        p.len() == self.dim() && self.point_at(&self.parameter(p)) == p
    }

    pub fn len(&self) -> usize {
        self.incident.len()
    }

    pub fn is_empty(&self) -> bool {
        self.incident.is_empty()
    }
}

/// Canonical line through two distinct points.
pub fn canonical_line(p: &[Scalar], q: &[Scalar]) -> Result<Line> {
    Line::through(p, q)
}
