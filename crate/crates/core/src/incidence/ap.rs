//! Arithmetic progressions and their lift to rich lines.
//!
//! Progressions are counted as sets: `{y, y+x, …, y+(r-1)x}` is recorded once,
//! with the difference `x` chosen so its first nonzero coordinate is positive
//! (positive real part, or zero real part and positive imaginary part).

use serde::{Deserialize, Serialize};

use super::line::Line;
use crate::config::PointSet;
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use num_traits::{One, Zero};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct APRecord {
    pub start: Vec<Scalar>,
    pub diff: Vec<Scalar>,
    pub len: usize,
}

impl APRecord {
    /// Term `j`, i.e. `start + j·diff`.
    pub fn term(&self, j: usize) -> Vec<Scalar> {
        let j = Scalar::from_int(j as i64);
        self.start
            .iter()
            .zip(&self.diff)
            .map(|(y, x)| y + &(&j * x))
            .collect()
    }

    /// The line `{(z, start + z·diff)}` of `ℂ^{1+d}`; it passes through the
    /// `len` points `(j, term(j))` of `[len] × V`.
    pub fn lifted_line(&self) -> Line {
        let mut dir = Vec::with_capacity(self.diff.len() + 1);
        dir.push(Scalar::one());
        dir.extend(self.diff.iter().cloned());
        let mut base = Vec::with_capacity(self.start.len() + 1);
        base.push(Scalar::zero());
        base.extend(self.start.iter().cloned());
        Line::from_parts(dir, base, Vec::new())
    }
}

/// `true` when the first nonzero coordinate is positive in the sign order.
pub fn is_sign_canonical(x: &[Scalar]) -> bool {
    x.iter().find(|c| !c.is_zero()).is_some_and(Scalar::is_positive)
}

/// Number of `r`-term progressions in `v` (as sets) and the progressions
/// themselves, ordered by start index and then by second-term index.
pub fn count_aps(v: &PointSet, r: usize) -> Result<(usize, Vec<APRecord>)> {
    if r < 2 {
        return Err(Error::InvalidParameter("progressions need r >= 2".into()));
    }
    let index = v.index_map();
    let mut out = Vec::new();
    for (i, y) in v.points().iter().enumerate() {
        for (j, second) in v.points().iter().enumerate() {
            if i == j {
                continue;
            }
            let x: Vec<Scalar> = second.iter().zip(y).map(|(a, b)| a - b).collect();
            if !is_sign_canonical(&x) {
                continue;
            }
            let mut term = second.clone();
            let mut ok = true;
            for _ in 2..r {
                for (t, dx) in term.iter_mut().zip(&x) {
                    *t += dx;
                }
                if !index.contains_key(term.as_slice()) {
                    ok = false;
                    break;
                }
            }
            if ok {
                out.push(APRecord {
                    start: y.clone(),
                    diff: x,
                    len: r,
                });
            }
        }
    }
    Ok((out.len(), out))
}

/// Lifts progressions of `v` to lines of `[r] × v` (as laid out by
/// [`crate::config::lift`]) with their incident indices filled in.
pub fn lift_progressions(v: &PointSet, aps: &[APRecord]) -> Vec<Line> {
    let index = v.index_map();
    let n = v.len();
    aps.iter()
        .map(|ap| {
            let incident = (0..ap.len)
                .map(|j| j * n + index[ap.term(j).as_slice()])
                .collect();
            ap.lifted_line().with_incident(incident)
        })
        .collect()
}
