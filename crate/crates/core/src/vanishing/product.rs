//! Hyperplanes in product sets and the progression pipeline.

use std::collections::HashSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow, Zero};
use serde::{Deserialize, Serialize};

use super::pipeline::{extract_hyperplane_with_lines, PipelineTrace};
use super::poly::Constants;
use crate::config::{lift, power, PointSet};
use crate::error::{Error, Result};
use crate::incidence::{count_aps, lift_progressions, Hyperplane};
use crate::linalg::dot;
use crate::scalar::{ratio_serde, Scalar};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProductSlice {
    pub hyperplane: Hyperplane,
    /// Indices of `V ∩ H'`.
    pub subset: Vec<usize>,
    /// Factor block that carries the free coordinates.
    pub lead_block: usize,
    /// Indices into `V` of the fixed coordinates of the other blocks, in
    /// block order.
    pub fixed: Vec<usize>,
    /// `|H ∩ V^ℓ| / n^ℓ`.
    #[serde(with = "ratio_serde")]
    pub density: BigRational,
    pub product_hits: usize,
}

impl ProductSlice {
    /// `|H' ∩ V| ≥ δ n`.
    pub fn density_bound_holds(&self, n: usize) -> bool {
        BigRational::from_integer(BigInt::from(self.subset.len()))
            >= &self.density * BigRational::from_integer(BigInt::from(n))
    }
}

/// Calls `f` with every tuple in `{0..n}^len`, last position fastest.
fn for_each_tuple(n: usize, len: usize, mut f: impl FnMut(&[usize])) {
    if len > 0 && n == 0 {
        return;
    }
    let mut t = vec![0; len];
    loop {
        f(&t);
        let mut pos = len;
        loop {
            if pos == 0 {
                return;
            }
            pos -= 1;
            t[pos] += 1;
            if t[pos] < n {
                break;
            }
            t[pos] = 0;
        }
    }
}

/// Given a hyperplane `H` of `ℂ^{dℓ}` meeting `V^ℓ` in a `δ` fraction of its
/// points, fixes all factors but the first one with a nonzero normal block
/// so that the slice `H'` of `ℂ^d` holds at least `δ n` points of `V`.
pub fn hyperplane_from_product(h: &Hyperplane, v: &PointSet, l: usize) -> Result<ProductSlice> {
    let d = v.dim();
    let n = v.len();
    if l == 0 || h.dim() != d * l {
        return Err(Error::Dimension {
            expected: d * l,
            found: h.dim(),
        });
    }
    let blocks: Vec<&[Scalar]> = h.normal().chunks(d).collect();
    let lead = blocks
        .iter()
        .position(|b| b.iter().any(|x| !x.is_zero()))
        .ok_or(Error::ZeroNormal)?;
    let others: Vec<usize> = (0..l).filter(|&b| b != lead).collect();
    // ⟨a, h_b⟩ for every point a and block b
    let partial: Vec<Vec<Scalar>> = blocks
        .iter()
        .map(|b| v.points().iter().map(|p| dot(p, b)).collect())
        .collect();

    let mut product_hits = 0usize;
    let mut best: Option<(usize, Vec<usize>, Scalar)> = None;
    for_each_tuple(n, others.len(), |fixed| {
        let shift: Scalar = others.iter().zip(fixed).map(|(&b, &a)| partial[b][a].clone()).sum();
        let rhs = h.offset() - &shift;
        let hits = partial[lead].iter().filter(|x| **x == rhs).count();
        product_hits += hits;
        if best.as_ref().is_none_or(|(c, _, _)| hits > *c) {
            best = Some((hits, fixed.to_vec(), rhs));
        }
    });
    if product_hits == 0 {
        return Err(Error::DisjointHyperplane);
    }
    let (hits, fixed, rhs) = best.expect("at least one tuple");
    let slice = Hyperplane::new(blocks[lead].to_vec(), rhs)?;
    let subset = slice.members(v);
    // x ∈ H' exactly when the tuple with x in the lead block lies in H
    let direct = (0..n)
        .filter(|&x| {
            let mut point = Vec::with_capacity(d * l);
            let mut it = fixed.iter();
            for b in 0..l {
                let idx = if b == lead { x } else { *it.next().expect("fixed block") };
                point.extend(v.point(idx).iter().cloned());
            }
            h.contains(&point)
        })
        .collect::<Vec<_>>();
    if direct != subset || subset.len() != hits {
        return Err(Error::Invariant("slice and product intersection disagree".into()));
    }
    let total = Pow::pow(&BigInt::from(n), l as u32);
    let density = BigRational::new(BigInt::from(product_hits), total);
    let out = ProductSlice {
        hyperplane: slice,
        subset,
        lead_block: lead,
        fixed,
        density,
        product_hits,
    };
    if !out.density_bound_holds(n) {
        return Err(Error::Invariant("best slice is below the average density".into()));
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProgressionTrace {
    pub r: usize,
    pub l: usize,
    pub progressions: usize,
    pub lifted_points: usize,
    pub distinct_lines: usize,
    pub pipeline: Option<PipelineTrace>,
    /// Slice `z_1 = j` with the most points of `H`.
    pub slice: Option<usize>,
    pub slice_size: Option<usize>,
    pub product: Option<ProductSlice>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProgressionOutcome {
    pub hyperplane: Option<Hyperplane>,
    pub subset: Vec<usize>,
    pub trace: ProgressionTrace,
}

/// Lifts the `r`-term progressions of `V^ℓ` to rich lines of `[r] × V^ℓ`,
/// runs the hyperplane pipeline there, slices the hyperplane at its best
/// first coordinate and pulls the slice back to `ℂ^d`.
pub fn ap_hyperplane(v: &PointSet, r: usize, l: usize, constants: &Constants) -> Result<ProgressionOutcome> {
    if r < 2 || l == 0 {
        return Err(Error::InvalidParameter("need r >= 2 and l >= 1".into()));
    }
    let vl = power(v, l)?;
    let lifted = lift(&vl, r)?;
    let (count, aps) = count_aps(&vl, r)?;
    let lines = lift_progressions(&vl, &aps);
    let distinct: HashSet<_> = lines.iter().collect();
    if distinct.len() != count {
        return Err(Error::Invariant("two progressions lifted to the same line".into()));
    }
    let mut trace = ProgressionTrace {
        r,
        l,
        progressions: count,
        lifted_points: lifted.len(),
        distinct_lines: distinct.len(),
        pipeline: None,
        slice: None,
        slice_size: None,
        product: None,
    };
    let empty = |trace| ProgressionOutcome {
        hyperplane: None,
        subset: Vec::new(),
        trace,
    };
    if count == 0 {
        return Ok(empty(trace));
    }
    let ex = extract_hyperplane_with_lines(&lifted, r, constants, &lines)?;
    trace.pipeline = Some(ex.trace);
    let Some(h) = ex.hyperplane else {
        return Ok(empty(trace));
    };
    let first_only = h.normal()[0].is_one() && h.normal()[1..].iter().all(Zero::is_zero);
    if first_only {
        return Err(Error::Invariant("hyperplane is a level set of the lifting coordinate".into()));
    }
    let nl = vl.len();
    let (j, size) = (0..r)
        .map(|j| (j, ex.subset.iter().filter(|&&i| i / nl == j).count()))
        .fold((0, 0), |best, cur| if cur.1 > best.1 { cur } else { best });
    trace.slice = Some(j);
    trace.slice_size = Some(size);
    let rest: Vec<Scalar> = h.normal()[1..].to_vec();
    let offset = h.offset() - &(&Scalar::from_int(j as i64) * &h.normal()[0]);
    let projected = Hyperplane::new(rest, offset)?;
    let slice_points: Vec<usize> = ex.subset.iter().filter(|&&i| i / nl == j).map(|&i| i % nl).collect();
    if slice_points.iter().any(|&i| !projected.contains(vl.point(i))) {
        return Err(Error::Invariant("sliced point left the projected hyperplane".into()));
    }
    let product = hyperplane_from_product(&projected, v, l)?;
    let out = ProgressionOutcome {
        hyperplane: Some(product.hyperplane.clone()),
        subset: product.subset.clone(),
        trace: ProgressionTrace {
            product: Some(product),
            ..trace
        },
    };
    Ok(out)
}
