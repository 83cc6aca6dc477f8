//! Design matrices built from collinear tuples.
//!
//! Every `r`-rich line is covered by `r`-tuples of its points (consecutive
//! disjoint blocks in line order, plus the last `r` points when `r` does not
//! divide the count). Under the degree `r-2` Veronese map the images of each
//! tuple satisfy exactly one linear relation with all coefficients nonzero;
//! these relations are the rows of a sparse matrix `A` with `A·M = 0`, where
//! `M` stacks the Veronese images of all points.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::config::PointSet;
use crate::error::{Error, Result};
use crate::incidence::{oracle::collinear, Line};
use crate::linalg::{modular_rank, sparse_rank, ExactMatrix};
use crate::scalar::{opt_ratio_serde, Scalar};
use crate::veronese::{embed, MonomialBasis};

/// Design parameters: row supports `≤ q`, column supports `≥ k`, pairwise
/// column-support intersections `≤ t`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DesignParams {
    pub q: usize,
    pub k: usize,
    pub t: usize,
}

/// The tuples `R_L` of every line and their union `R`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TupleCover {
    /// `per_line[i]` holds the tuples of line `i` (point indices in line order).
    pub per_line: Vec<Vec<Vec<usize>>>,
}

impl TupleCover {
    /// All tuples of `R` with the index of the line they came from.
    pub fn tuples(&self) -> impl Iterator<Item = (usize, &Vec<usize>)> {
        self.per_line
            .iter()
            .enumerate()
            .flat_map(|(l, ts)| ts.iter().map(move |t| (l, t)))
    }

    pub fn len(&self) -> usize {
        self.per_line.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Number of tuples containing each point.
    pub fn point_multiplicity(&self, n: usize) -> Vec<usize> {
        let mut m = vec![0; n];
        for (_, t) in self.tuples() {
            for &p in t {
                m[p] += 1;
            }
        }
        m
    }

    /// Largest number of tuples sharing a pair of distinct points.
    pub fn max_pair_multiplicity(&self) -> usize {
        let mut pairs: HashMap<(usize, usize), usize> = HashMap::new();
        for (_, t) in self.tuples() {
            for (i, &a) in t.iter().enumerate() {
                for &b in &t[i + 1..] {
                    *pairs.entry((a.min(b), a.max(b))).or_default() += 1;
                }
            }
        }
        pairs.values().copied().max().unwrap_or(0)
    }
}

/// Incident points of `line`, sorted by their parameter along the line.
pub fn order_on_line(v: &PointSet, line: &Line) -> Vec<usize> {
    let mut idx = line.incident().to_vec();
    idx.sort_by_key(|&a| line.parameter(v.point(a)));
    idx
}

/// Covers `line_points` (already in line order) by `r`-tuples: disjoint
/// consecutive blocks, then the last `r` points if a remainder is left.
pub fn tuple_cover(line_points: &[usize], r: usize) -> Result<Vec<Vec<usize>>> {
    if r == 0 || line_points.len() < r {
        return Err(Error::TooFewPoints {
            needed: r,
            found: line_points.len(),
        });
    }
    let mut out: Vec<Vec<usize>> = line_points.chunks_exact(r).map(<[usize]>::to_vec).collect();
    if !line_points.len().is_multiple_of(r) {
        out.push(line_points[line_points.len() - r..].to_vec());
    }
    Ok(out)
}

/// Coefficients `α` with `Σ α_j φ_{d,deg}(v_{i_j}) = 0` for a collinear
/// tuple. The relation space must be one-dimensional with every coefficient
/// nonzero; the result is scaled so `α_1 = 1`.
pub fn dependency_coeffs(v: &PointSet, tuple: &[usize], deg: u32) -> Result<Vec<Scalar>> {
    if tuple.len() != deg as usize + 2 {
        return Err(Error::InvalidParameter(format!(
            "a tuple of {} points needs degree {}",
            tuple.len(),
            tuple.len().saturating_sub(2)
        )));
    }
    for (i, &a) in tuple.iter().enumerate() {
        for &b in &tuple[i + 1..] {
            if v.point(a) == v.point(b) {
                return Err(Error::IdenticalPoints);
            }
        }
    }
    let first = v.point(tuple[0]);
    let second = v.point(tuple[1]);
    if !tuple[2..].iter().all(|&c| collinear(first, second, v.point(c))) {
        return Err(Error::NotCollinear);
    }
    let basis = MonomialBasis::new(v.dim(), deg);
    let images: Vec<Vec<Scalar>> = tuple.iter().map(|&i| basis.evaluate(v.point(i))).collect();
    let u = ExactMatrix::from_rows(basis.len(), images)?;
    let kernel = u.transpose().nullspace();
    if kernel.len() != 1 {
        return Err(Error::Invariant(format!(
            "expected a one-dimensional relation space, found dimension {}",
            kernel.len()
        )));
    }
    let alpha = kernel.into_iter().next().expect("one vector");
    if alpha.iter().any(Zero::is_zero) {
        return Err(Error::Invariant("relation has a zero coefficient".into()));
    }
    Ok(alpha)
}

/// Sparse `m × n` design matrix together with the tuples that produced it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DesignMatrix {
    pub rows: usize,
    pub cols: usize,
    /// Per row, `(column, value)` pairs with nonzero values, sorted by column.
    pub entries: Vec<Vec<(usize, Scalar)>>,
    /// Parameters the construction promises.
    pub declared: Option<DesignParams>,
    pub cover: TupleCover,
}

impl DesignMatrix {
    pub fn from_sparse_rows(cols: usize, entries: Vec<Vec<(usize, Scalar)>>) -> DesignMatrix {
        let entries: Vec<Vec<(usize, Scalar)>> = entries
            .into_iter()
            .map(|mut r| {
                r.retain(|(_, v)| !v.is_zero());
                r.sort_by_key(|(c, _)| *c);
                r
            })
            .collect();
        DesignMatrix {
            rows: entries.len(),
            cols,
            entries,
            declared: None,
            cover: TupleCover::default(),
        }
    }

    pub fn from_dense(m: &ExactMatrix) -> DesignMatrix {
        let entries = (0..m.rows())
            .map(|i| {
                m.row(i)
                    .iter()
                    .enumerate()
                    .filter(|(_, v)| !v.is_zero())
                    .map(|(j, v)| (j, v.clone()))
                    .collect()
            })
            .collect();
        DesignMatrix::from_sparse_rows(m.cols(), entries)
    }

    pub fn to_dense(&self) -> ExactMatrix {
        let triplets: Vec<(usize, usize, Scalar)> = self
            .entries
            .iter()
            .enumerate()
            .flat_map(|(i, r)| r.iter().map(move |(j, v)| (i, *j, v.clone())))
            .collect();
        ExactMatrix::from_triplets(self.rows, self.cols, &triplets)
    }

    /// Column supports as sorted row-index lists.
    pub fn column_supports(&self) -> Vec<Vec<usize>> {
        let mut cols = vec![Vec::new(); self.cols];
        for (i, r) in self.entries.iter().enumerate() {
            for (j, _) in r {
                cols[*j].push(i);
            }
        }
        cols
    }

    /// `(row, col, value)` triplets for external auditing.
    pub fn triplets(&self) -> Vec<(usize, usize, Scalar)> {
        self.entries
            .iter()
            .enumerate()
            .flat_map(|(i, r)| r.iter().map(move |(j, v)| (i, *j, v.clone())))
            .collect()
    }

    /// `A·M`, computed from the sparse rows.
    pub fn mul_dense(&self, m: &ExactMatrix) -> Result<ExactMatrix> {
        if m.rows() != self.cols {
            return Err(Error::Dimension {
                expected: self.cols,
                found: m.rows(),
            });
        }
        let mut out = ExactMatrix::zeros(self.rows, m.cols());
        for (i, r) in self.entries.iter().enumerate() {
            for (k, a) in r {
                for j in 0..m.cols() {
                    let b = &m[(*k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += &(a * b);
                    }
                }
            }
        }
        Ok(out)
    }
}

/// The tuple design matrix for `lines` (all `r`-rich) and the Veronese matrix
/// `M = embed(V, r-2)`.
#[derive(Clone, Debug)]
pub struct Assembly {
    pub design: DesignMatrix,
    pub veronese: ExactMatrix,
}

/// Builds `A` row by row from the tuple cover and checks `A·M = 0` exactly.
pub fn assemble(v: &PointSet, lines: &[Line], r: usize) -> Result<Assembly> {
    if r < 2 {
        return Err(Error::InvalidParameter("tuples need r >= 2".into()));
    }
    let deg = (r - 2) as u32;
    let mut per_line = Vec::with_capacity(lines.len());
    for line in lines {
        let ordered = order_on_line(v, line);
        per_line.push(tuple_cover(&ordered, r)?);
    }
    let cover = TupleCover { per_line };
    let mut entries = Vec::with_capacity(cover.len());
    for (_, t) in cover.tuples() {
        let alpha = dependency_coeffs(v, t, deg)?;
        entries.push(t.iter().copied().zip(alpha).collect());
    }
    let mut design = DesignMatrix::from_sparse_rows(v.len(), entries);
    let min_lines = crate::incidence::line_degrees(v.len(), lines)
        .into_iter()
        .min()
        .unwrap_or(0);
    design.declared = Some(DesignParams {
        q: r,
        k: min_lines,
        t: 2,
    });
    design.cover = cover;
    let veronese = embed(v, deg);
    if !design.mul_dense(&veronese)?.is_zero() {
        return Err(Error::Invariant("A·M is not zero".into()));
    }
    Ok(Assembly { design, veronese })
}

/// Measured design parameters and any violations of the declared ones.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DesignReport {
    pub measured: DesignParams,
    pub violations: Vec<String>,
}

/// Exact support census of `a`.
pub fn verify_design(a: &DesignMatrix) -> DesignReport {
    let q = a.entries.iter().map(Vec::len).max().unwrap_or(0);
    let supports = a.column_supports();
    let k = supports.iter().map(Vec::len).min().unwrap_or(0);
    let mut t = 0;
    // pairwise intersections through row co-occurrence counts
    let mut pair: HashMap<(usize, usize), usize> = HashMap::new();
    for r in &a.entries {
        for (i, (c1, _)) in r.iter().enumerate() {
            for (c2, _) in &r[i + 1..] {
                let e = pair.entry((*c1, *c2)).or_default();
                *e += 1;
                t = t.max(*e);
            }
        }
    }
    let measured = DesignParams { q, k, t };
    let mut violations = Vec::new();
    if let Some(d) = a.declared {
        if q > d.q {
            violations.push(format!("row support {q} exceeds q = {}", d.q));
        }
        if k < d.k {
            violations.push(format!("column support {k} below k = {}", d.k));
        }
        if t > d.t {
            violations.push(format!("column intersection {t} exceeds t = {}", d.t));
        }
    }
    DesignReport {
        measured,
        violations,
    }
}

/// Exact rank of a design matrix against both rank lower bounds
/// `n - n·t·q²/k` and `n - m·t·q²/k²`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankBoundReport {
    pub m: usize,
    pub n: usize,
    pub params: DesignParams,
    pub rank: usize,
    /// `None` when `k = 0` (the bound is vacuous).
    #[serde(with = "opt_ratio_serde")]
    pub bound_columns: Option<BigRational>,
    #[serde(with = "opt_ratio_serde")]
    pub bound_rows: Option<BigRational>,
    pub rank_veronese: Option<usize>,
}

impl RankBoundReport {
    pub fn bound_columns_holds(&self) -> bool {
        self.bound_columns
            .as_ref()
            .is_none_or(|b| BigRational::from_integer(BigInt::from(self.rank)) >= *b)
    }

    pub fn bound_rows_holds(&self) -> bool {
        self.bound_rows
            .as_ref()
            .is_none_or(|b| BigRational::from_integer(BigInt::from(self.rank)) >= *b)
    }

    /// `rank(A) + rank(M) ≤ n` whenever `A·M = 0`.
    pub fn complementary_holds(&self) -> bool {
        self.rank_veronese.is_none_or(|rm| self.rank + rm <= self.n)
    }

    pub fn all_hold(&self) -> bool {
        self.bound_columns_holds() && self.bound_rows_holds() && self.complementary_holds()
    }
}

/// When `a * m = 0` the rank of `a` is at most `n - rank(m)`, and the rank
/// modulo a prime never exceeds the exact rank. Equality of the two
/// pins the exact rank without rational elimination.
fn certified_rank(a: &DesignMatrix, m: Option<&ExactMatrix>, rank_m: Option<usize>) -> Option<usize> {
    let (m, rank_m) = (m?, rank_m?);
    let product = a.mul_dense(m).ok()?;
    if !(0..product.rows()).all(|i| (0..product.cols()).all(|j| product[(i, j)].is_zero())) {
        return None;
    }
    let upper = a.cols - rank_m;
    (modular_rank(&a.entries, a.cols)? == upper).then_some(upper)
}

/// Evaluates both rank bounds with the measured parameters of `a`.
pub fn rank_bound_check(a: &DesignMatrix, veronese: Option<&ExactMatrix>) -> RankBoundReport {
    let params = verify_design(a).measured;
    let rank_veronese = veronese.map(ExactMatrix::rank);
    let rank = certified_rank(a, veronese, rank_veronese).unwrap_or_else(|| sparse_rank(&a.entries));
    let n = BigInt::from(a.cols);
    let m = BigInt::from(a.rows);
    let tq2 = BigInt::from(params.t * params.q * params.q);
    let (bound_columns, bound_rows) = if params.k == 0 {
        (None, None)
    } else {
        let k = BigInt::from(params.k);
        let n_r = BigRational::from_integer(n.clone());
        (
            Some(&n_r - BigRational::new(&n * &tq2, k.clone())),
            Some(&n_r - BigRational::new(&m * &tq2, &k * &k)),
        )
    };
    RankBoundReport {
        m: a.rows,
        n: a.cols,
        params,
        rank,
        bound_columns,
        bound_rows,
        rank_veronese,
    }
}

/// Random sparse matrix for stress-testing the rank bounds: each row picks a
/// random support of size `2..=q` and nonzero integer entries in `[-5, 5]`;
/// rows that would push a column pair above `t` shared rows are rejected.
/// Test apparatus only.
pub fn random_design_matrix(rows: usize, cols: usize, q: usize, t: usize, seed: u64) -> DesignMatrix {
    assert!(q >= 1 && q <= cols, "need 1 <= q <= cols");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pair: HashMap<(usize, usize), usize> = HashMap::new();
    let mut entries = Vec::with_capacity(rows);
    let mut attempts = 0;
    while entries.len() < rows && attempts < rows * 50 {
        attempts += 1;
        let size = if q == 1 { 1 } else { rng.gen_range(2..=q) };
        let mut support: Vec<usize> = sample(&mut rng, cols, size).into_vec();
        support.sort_unstable();
        let ok = support.iter().enumerate().all(|(i, &a)| {
            support[i + 1..]
                .iter()
                .all(|&b| pair.get(&(a, b)).copied().unwrap_or(0) < t)
        });
        if !ok {
            continue;
        }
        for (i, &a) in support.iter().enumerate() {
            for &b in &support[i + 1..] {
                *pair.entry((a, b)).or_default() += 1;
            }
        }
        let row = support
            .into_iter()
            .map(|c| {
                let mut v = 0;
                while v == 0 {
                    v = rng.gen_range(-5..=5);
                }
                (c, Scalar::from_int(v))
            })
            .collect();
        entries.push(row);
    }
    let mut a = DesignMatrix::from_sparse_rows(cols, entries);
    a.declared = Some(DesignParams { q, k: 0, t });
    a
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::grid;
    use crate::incidence::rich_lines;
    use crate::scalar::int_vec;

    fn on_x_axis(n: i64) -> PointSet {
        PointSet::new(2, (0..n).map(|t| int_vec(&[t, 0])).collect()).unwrap()
    }

    #[test]
    fn cover_examples() {
        assert_eq!(tuple_cover(&[0, 1, 2, 3, 4, 5], 3).unwrap(), vec![vec![0, 1, 2], vec![3, 4, 5]]);
        assert_eq!(tuple_cover(&[0, 1, 2], 3).unwrap(), vec![vec![0, 1, 2]]);
        let c = tuple_cover(&[10, 11, 12, 13], 3).unwrap();
        assert_eq!(c, vec![vec![10, 11, 12], vec![11, 12, 13]]);
        let cover = TupleCover { per_line: vec![c] };
        assert_eq!(cover.max_pair_multiplicity(), 2);
        assert!(matches!(tuple_cover(&[0, 1], 3), Err(Error::TooFewPoints { .. })));
    }

    #[test]
    fn cover_properties_for_all_sizes() {
        for r in 2..7 {
            for len in r..4 * r {
                let pts: Vec<usize> = (0..len).collect();
                let cover = TupleCover { per_line: vec![tuple_cover(&pts, r).unwrap()] };
                assert!(cover.point_multiplicity(len).iter().all(|&m| m >= 1));
                assert!(cover.max_pair_multiplicity() <= 2);
                assert!(cover.tuples().all(|(_, t)| t.len() == r));
            }
        }
    }

    #[test]
    fn finite_difference_coefficients() {
        let v = on_x_axis(4);
        assert_eq!(dependency_coeffs(&v, &[0, 1, 2, 3], 2).unwrap(), int_vec(&[1, -3, 3, -1]));
        let v = on_x_axis(3);
        assert_eq!(dependency_coeffs(&v, &[0, 1, 2], 1).unwrap(), int_vec(&[1, -2, 1]));
    }

    #[test]
    fn dependency_errors() {
        let v = PointSet::from_i64(2, &[&[0, 0], &[1, 0], &[0, 1]]).unwrap();
        assert!(matches!(dependency_coeffs(&v, &[0, 1, 2], 1), Err(Error::NotCollinear)));
        assert!(dependency_coeffs(&v, &[0, 1, 2], 2).is_err());
    }

    #[test]
    fn grid_assembly() {
        let g = grid(2, 3).unwrap();
        let lines = rich_lines(&g, 3).unwrap();
        let asm = assemble(&g, &lines, 3).unwrap();
        assert_eq!((asm.design.rows, asm.design.cols), (8, 9));
        assert_eq!((asm.veronese.rows(), asm.veronese.cols()), (9, 3));
        let rep = verify_design(&asm.design);
        assert_eq!(rep.measured.q, 3);
        assert!(rep.measured.t <= 2);
        assert!(rep.measured.k >= 2);
        assert!(rep.violations.is_empty());
        let rb = rank_bound_check(&asm.design, Some(&asm.veronese));
        assert!(rb.all_hold());
    }

    #[test]
    fn trivial_assemblies() {
        let v = on_x_axis(4);
        let lines = rich_lines(&v, 4).unwrap();
        assert_eq!(assemble(&v, &lines, 4).unwrap().design.rows, 1);
        let tri = PointSet::from_i64(2, &[&[0, 0], &[1, 0], &[0, 1]]).unwrap();
        let asm = assemble(&tri, &[], 3).unwrap();
        assert_eq!(asm.design.rows, 0);
    }

    #[test]
    fn support_census() {
        let id = DesignMatrix::from_dense(&ExactMatrix::identity(5));
        assert_eq!(verify_design(&id).measured, DesignParams { q: 1, k: 1, t: 0 });
        let ones = DesignMatrix::from_dense(&ExactMatrix::from_i64(&[&[1, 1], &[1, 1]]));
        assert_eq!(verify_design(&ones).measured, DesignParams { q: 2, k: 2, t: 2 });
        let rb = rank_bound_check(&id, None);
        assert_eq!(rb.rank, 5);
        assert_eq!(rb.bound_columns, Some(BigRational::from_integer(BigInt::from(5))));
        assert!(rb.all_hold());
    }

    #[test]
    fn vacuous_bound_for_empty_column() {
        let a = DesignMatrix::from_sparse_rows(3, vec![vec![(0, Scalar::from_int(1))]]);
        let rb = rank_bound_check(&a, None);
        assert_eq!(rb.params.k, 0);
        assert!(rb.bound_columns.is_none() && rb.all_hold());
    }

    #[test]
    fn random_generator_respects_t() {
        for seed in 0..10 {
            let a = random_design_matrix(40, 12, 3, 2, seed);
            let rep = verify_design(&a);
            assert!(rep.measured.t <= 2 && rep.measured.q <= 3);
            assert!(rep.violations.is_empty());
        }
    }
}
