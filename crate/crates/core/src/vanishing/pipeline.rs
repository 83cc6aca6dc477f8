//! Finding a hyperplane that holds many points of a set with many rich
//! lines: refine, pigeonhole by degree, refine again, find a vanishing
//! polynomial, and take the hyperplane of a flat point.

use std::collections::{HashMap, HashSet};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Pow, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::flat::{classify_flat_points, lines_in_zero_set};
use super::poly::{find_vanishing_poly, lemma_findpoly_with_lines, pow_signed, Certificate, Constants, LemmaMode};
use crate::config::PointSet;
use crate::error::{Error, Result};
use crate::incidence::{incidences, rich_lines, Hyperplane, IncidenceGraph, Line};
use crate::linalg::{rank_of, ExactMatrix};
use crate::refine::{dyadic_partition, refine};
use crate::scalar::{opt_ratio_serde, ratio_serde, Scalar};
use crate::veronese::Polynomial;

/// Every intermediate quantity of one pipeline run.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PipelineTrace {
    pub n: usize,
    pub dim: usize,
    pub r: usize,
    pub lines: usize,
    pub incidences: usize,
    pub constants: Constants,
    /// `α = |L| r^d / (C n²)`; the theorem applies when `α ≥ 1`.
    #[serde(with = "ratio_serde")]
    pub alpha: BigRational,
    pub theorem_regime: bool,
    /// `C' α n / r^{d-2}`.
    #[serde(with = "ratio_serde")]
    pub guaranteed_size: BigRational,
    /// `|I| / (4n)`.
    #[serde(with = "ratio_serde")]
    pub k: BigRational,
    pub refined_points: usize,
    pub refined_lines: usize,
    pub refined_incidences: usize,
    pub dyadic_groups: Vec<(u32, usize)>,
    pub chosen_group: u32,
    pub group_incidences: usize,
    pub dyadic_witness_holds: bool,
    pub second_points: usize,
    pub second_lines: usize,
    pub second_incidences: usize,
    /// `r / (16 j²)` as computed, and the integer richness actually used.
    #[serde(with = "ratio_serde")]
    pub r0_exact: BigRational,
    pub r0: usize,
    pub r0_clamped: bool,
    /// `2^{j-3} k`.
    #[serde(with = "ratio_serde")]
    pub k0: BigRational,
    pub certificate: Option<Certificate>,
    pub polynomial: Option<Polynomial>,
    pub vanishing_lines: usize,
    pub flat_points: usize,
    pub joints: usize,
    pub chosen_point: Option<usize>,
    pub hyperplane: Option<Hyperplane>,
    pub subset_size: Option<usize>,
    /// `(r0 - 1) k0`.
    #[serde(with = "ratio_serde")]
    pub lower_bound: BigRational,
    pub lower_bound_holds: Option<bool>,
    #[serde(with = "opt_ratio_serde")]
    pub guaranteed_ratio: Option<BigRational>,
    pub warnings: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Extraction {
    pub hyperplane: Option<Hyperplane>,
    /// Indices of `V ∩ H`.
    pub subset: Vec<usize>,
    pub trace: PipelineTrace,
}

fn int(x: usize) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

/// Runs the pipeline on the `r`-rich lines of `v`.
pub fn extract_hyperplane(v: &PointSet, r: usize, constants: &Constants) -> Result<Extraction> {
    let lines = rich_lines(v, r)?;
    extract_hyperplane_with_lines(v, r, constants, &lines)
}

/// Runs the pipeline on an explicit family of `r`-rich lines of `v`.
pub fn extract_hyperplane_with_lines(
    v: &PointSet,
    r: usize,
    constants: &Constants,
    lines: &[Line],
) -> Result<Extraction> {
    if r < 2 {
        return Err(Error::InvalidParameter("the pipeline needs r >= 2".into()));
    }
    if lines.is_empty() {
        return Err(Error::NoRichLines(r));
    }
    let n = v.len();
    let d = v.dim();
    let mut warnings = Vec::new();
    let graph = incidences(v, lines)?;
    let total = graph.len();

    let alpha = int(lines.len()) * pow_signed(r, d as i64) / (&constants.theorem * int(n * n));
    let theorem_regime = alpha >= BigRational::from_integer(BigInt::from(1));
    if !theorem_regime {
        warnings.push("below the theorem's line-count threshold; no size guarantee".into());
    }
    let guaranteed_size = &constants.conclusion * &alpha * int(n) / pow_signed(r, d as i64 - 2);

    // first refinement of I(V, L)
    let first = refine(&graph)?;
    let k = first.left_threshold.clone();
    let core = first.core();
    let deg_map = core.left_degrees();
    let degrees: Vec<usize> = first.left.iter().map(|p| deg_map[p]).collect();
    let dyadic = dyadic_partition(&first.left, &degrees, &k, Some(total))?;
    let j = dyadic.chosen;
    if !dyadic.witness_holds {
        warnings.push(format!("group {j} misses the |I|/(4j²) witness"));
    }

    // second refinement of I(L', V'_j)
    let chosen: HashSet<usize> = dyadic.chosen_points().iter().copied().collect();
    let group_graph = IncidenceGraph::new(
        dyadic.chosen_points().to_vec(),
        first.right.clone(),
        first.edges.iter().filter(|(a, _)| chosen.contains(a)).copied().collect(),
    );
    let second = refine(&group_graph)?;

    let j2 = int((16 * j * j) as usize);
    let r0_exact = int(r) / j2;
    let r0_ceil = r0_exact.ceil().to_integer().to_usize().unwrap_or(usize::MAX);
    let r0_clamped = r0_ceil < 4;
    let r0 = r0_ceil.max(4);
    if r0_clamped {
        warnings.push(format!("r0 = {r0_exact} clamped to 4"));
    }
    let k0 = &k * Pow::pow(&BigRational::from_integer(BigInt::from(2)), j as i32 - 3);
    let lower_bound = int(r0 - 1) * &k0;

    let mut trace = PipelineTrace {
        n,
        dim: d,
        r,
        lines: lines.len(),
        incidences: total,
        constants: constants.clone(),
        alpha,
        theorem_regime,
        guaranteed_size: guaranteed_size.clone(),
        k,
        refined_points: first.left.len(),
        refined_lines: first.right.len(),
        refined_incidences: first.edges.len(),
        dyadic_groups: dyadic.groups.iter().map(|(j, g)| (*j, g.len())).collect(),
        chosen_group: j,
        group_incidences: dyadic.group_incidences[&j],
        dyadic_witness_holds: dyadic.witness_holds,
        second_points: second.left.len(),
        second_lines: second.right.len(),
        second_incidences: second.edges.len(),
        r0_exact,
        r0,
        r0_clamped,
        k0,
        certificate: None,
        polynomial: None,
        vanishing_lines: 0,
        flat_points: 0,
        joints: 0,
        chosen_point: None,
        hyperplane: None,
        subset_size: None,
        lower_bound,
        lower_bound_holds: None,
        guaranteed_ratio: None,
        warnings: Vec::new(),
    };

    // V'' and L'' with incidences re-indexed into V''
    let sub = v.subset(&second.left);
    let position: HashMap<usize, usize> = second.left.iter().enumerate().map(|(i, &p)| (p, i)).collect();
    let sub_lines: Vec<Line> = second
        .right
        .iter()
        .map(|&li| {
            let incident: Vec<usize> = lines[li]
                .incident()
                .iter()
                .filter_map(|p| position.get(p).copied())
                .collect();
            lines[li].clone().with_incident(incident)
        })
        .collect();

    let rich_sub: Vec<Line> = sub_lines.iter().filter(|l| l.len() >= r0).cloned().collect();
    if rich_sub.is_empty() {
        warnings.push(format!("no line of the refined family is {r0}-rich on the refined set"));
    } else {
        let lemma = lemma_findpoly_with_lines(&sub, r0, LemmaMode::Bounded, &rich_sub)?;
        trace.certificate = Some(lemma.certificate);
    }

    let Some(f) = find_vanishing_poly(&sub, (r0 - 2) as u32)? else {
        warnings.push(format!("no polynomial of degree at most {} vanishes on the refined set", r0 - 2));
        trace.warnings = warnings;
        return Ok(Extraction {
            hyperplane: None,
            subset: Vec::new(),
            trace,
        });
    };
    trace.polynomial = Some(f.clone());

    let keep = lines_in_zero_set(&f, &sub_lines);
    trace.vanishing_lines = keep.len();
    let vanishing: Vec<Line> = keep.iter().map(|&i| sub_lines[i].clone()).collect();
    let classes = classify_flat_points(&sub, &vanishing, &f)?;
    trace.joints = classes.iter().filter(|c| !c.is_flat()).count();

    let mut best: Option<(usize, usize, Hyperplane)> = None;
    for c in classes.iter().filter(|c| c.is_flat() && !c.lines.is_empty()) {
        trace.flat_points += 1;
        let origin = second.left[c.point];
        let dirs: Vec<Vec<Scalar>> = c.lines.iter().map(|&l| vanishing[l].dir().to_vec()).collect();
        let h = best_hyperplane_through(v, origin, &dirs)?;
        let count = h.members(v).len();
        if best.as_ref().is_none_or(|(bc, _, _)| count > *bc) {
            best = Some((count, origin, h));
        }
    }

    let Some((count, origin, h)) = best else {
        warnings.push("every refined point is a joint or lies on no vanishing line".into());
        trace.warnings = warnings;
        return Ok(Extraction {
            hyperplane: None,
            subset: Vec::new(),
            trace,
        });
    };
    let holds = int(count) >= trace.lower_bound;
    if !holds {
        warnings.push("subset is smaller than (r0 - 1) k0".into());
    }
    trace.chosen_point = Some(origin);
    trace.hyperplane = Some(h.clone());
    trace.subset_size = Some(count);
    trace.lower_bound_holds = Some(holds);
    if !guaranteed_size.is_zero() {
        trace.guaranteed_ratio = Some(int(count) / guaranteed_size);
    }
    trace.warnings = warnings;
    Ok(Extraction {
        subset: h.members(v),
        hyperplane: Some(h),
        trace,
    })
}

/// Among hyperplanes through point `origin` of `v` containing the directions
/// `dirs`, one holding many points of `v`. When the directions span fewer
/// than `d - 1` dimensions the span is grown greedily by the point of `v`
/// whose difference with `origin` keeps the most points in the flat; the
/// last step compares the hyperplanes exactly. Ties go to lower indices.
pub(crate) fn best_hyperplane_through(v: &PointSet, origin: usize, dirs: &[Vec<Scalar>]) -> Result<Hyperplane> {
    let d = v.dim();
    let p = v.point(origin);
    let diffs: Vec<Vec<Scalar>> = v
        .points()
        .iter()
        .map(|q| q.iter().zip(p).map(|(a, b)| a - b).collect())
        .collect();
    let mut span: Vec<Vec<Scalar>> = dirs.to_vec();
    let mut rank = rank_of(&span, d);
    if rank >= d {
        return Err(Error::InvalidParameter("directions span the whole space".into()));
    }
    while rank + 1 < d {
        let mut seen: HashSet<Vec<Vec<Scalar>>> = HashSet::new();
        let mut best: Option<(usize, usize)> = None;
        for (qi, diff) in diffs.iter().enumerate() {
            let mut ext = span.clone();
            ext.push(diff.clone());
            let m = ExactMatrix::from_rows(d, ext.clone())?;
            let (reduced, pivots) = m.rref();
            if pivots.len() != rank + 1 {
                continue;
            }
            // the reduced rows identify the flat; count each flat once
            let key: Vec<Vec<Scalar>> = (0..pivots.len()).map(|i| reduced.row(i).to_vec()).collect();
            if !seen.insert(key) {
                continue;
            }
            let inside = diffs
                .iter()
                .filter(|x| {
                    let mut e = ext.clone();
                    e.push((*x).clone());
                    rank_of(&e, d) == rank + 1
                })
                .count();
            if best.is_none_or(|(b, _)| inside > b) {
                best = Some((inside, qi));
            }
        }
        match best {
            Some((_, qi)) => {
                span.push(diffs[qi].clone());
                rank += 1;
            }
            None => break,
        }
    }
    let normals = ExactMatrix::from_rows(d, span)?.nullspace();
    if rank + 1 == d {
        return Hyperplane::through(normals.into_iter().next().expect("corank one"), p);
    }
    // all of V lies in the flat: any hyperplane containing it will do
    Hyperplane::through(normals.into_iter().next().expect("corank at least one"), p)
}
