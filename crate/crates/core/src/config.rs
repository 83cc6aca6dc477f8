//! Point sets and the generators for the configurations studied here: integer
//! grids, pasted lower-dimensional grids, Cartesian powers and the
//! sum-product configuration `V = ∪_{t∈Q} {t} × (A+tA)^{d-1}`.

use std::collections::{BTreeSet, HashSet};

use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::incidence::Line;
use crate::scalar::{FieldKind, Scalar};

pub const DEFAULT_SIZE_CAP: usize = 20_000;
pub const SIZE_CAP_ENV: &str = "RICHLINES_SIZE_CAP";

/// Point cap for every generator; `RICHLINES_SIZE_CAP` overrides the default.
pub fn size_cap() -> usize {
    std::env::var(SIZE_CAP_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_SIZE_CAP)
}

fn check_cap(requested: u128) -> Result<()> {
    let cap = size_cap();
    if requested > cap as u128 {
        return Err(Error::SizeCap { requested, cap });
    }
    Ok(())
}

/// A finite list of pairwise distinct points of equal dimension.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointSet {
    dim: usize,
    points: Vec<Vec<Scalar>>,
    labels: Option<Vec<String>>,
}

impl PointSet {
    pub fn new(dim: usize, points: Vec<Vec<Scalar>>) -> Result<Self> {
        let mut seen = HashSet::with_capacity(points.len());
        for (i, p) in points.iter().enumerate() {
            if p.len() != dim {
                return Err(Error::Dimension {
                    expected: dim,
                    found: p.len(),
                });
            }
            if !seen.insert(p) {
                return Err(Error::DuplicatePoint(i));
            }
        }
        Ok(PointSet {
            dim,
            points,
            labels: None,
        })
    }

    pub fn from_i64(dim: usize, points: &[&[i64]]) -> Result<Self> {
        PointSet::new(
            dim,
            points
                .iter()
                .map(|p| p.iter().map(|&v| Scalar::from_int(v)).collect())
                .collect(),
        )
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.points.len() {
            return Err(Error::Dimension {
                expected: self.points.len(),
                found: labels.len(),
            });
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Vec<Scalar>] {
        &self.points
    }

    pub fn point(&self, i: usize) -> &[Scalar] {
        &self.points[i]
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn field(&self) -> FieldKind {
        self.points
            .iter()
            .flatten()
            .fold(FieldKind::Rational, |acc, x| acc.join(x.kind()))
    }

    /// The points at the given indices, in that order.
    pub fn subset(&self, idx: &[usize]) -> PointSet {
        PointSet {
            dim: self.dim,
            points: idx.iter().map(|&i| self.points[i].clone()).collect(),
            labels: self
                .labels
                .as_ref()
                .map(|l| idx.iter().map(|&i| l[i].clone()).collect()),
        }
    }

    /// Index lookup by exact coordinates.
    pub fn index_map(&self) -> std::collections::HashMap<&[Scalar], usize> {
        self.points
            .iter()
            .enumerate()
            .map(|(i, p)| (p.as_slice(), i))
            .collect()
    }

    /// Same points as a set, ignoring order.
    pub fn same_points(&self, other: &PointSet) -> bool {
        let a: BTreeSet<&Vec<Scalar>> = self.points.iter().collect();
        let b: BTreeSet<&Vec<Scalar>> = other.points.iter().collect();
        self.dim == other.dim && a == b
    }
}

/// Cartesian product of coordinate lists in lexicographic order.
fn lex_product(factors: &[Vec<Scalar>]) -> Vec<Vec<Scalar>> {
    let mut out: Vec<Vec<Scalar>> = vec![Vec::new()];
    for f in factors {
        let mut next = Vec::with_capacity(out.len() * f.len());
        for prefix in &out {
            for x in f {
                let mut p = prefix.clone();
                p.push(x.clone());
                next.push(p);
            }
        }
        out = next;
    }
    out
}

/// `{1, …, h}^d` in lexicographic order.
pub fn grid(d: usize, h: usize) -> Result<PointSet> {
    if d == 0 || h == 0 {
        return Err(Error::InvalidParameter("grid needs d >= 1 and h >= 1".into()));
    }
    check_cap((h as u128).checked_pow(d as u32).unwrap_or(u128::MAX))?;
    let side: Vec<Scalar> = (1..=h as i64).map(Scalar::from_int).collect();
    PointSet::new(d, lex_product(&vec![side; d]))
}

/// `copies` copies of the `ℓ`-dimensional grid of side `h`; copy `c`
/// (1-based) sits on the flat where every one of the remaining `d-ℓ`
/// coordinates equals `c`.
pub fn pasted_grids(d: usize, l: usize, copies: usize, h: usize) -> Result<PointSet> {
    if !(1 < l && l < d) {
        return Err(Error::InvalidParameter(format!(
            "pasted grids need 1 < l < d (got l={l}, d={d})"
        )));
    }
    if copies == 0 || h == 0 {
        return Err(Error::InvalidParameter("copies and h must be positive".into()));
    }
    let per = (h as u128).checked_pow(l as u32).unwrap_or(u128::MAX);
    check_cap(per.saturating_mul(copies as u128))?;
    let base = grid(l, h)?;
    let mut points = Vec::new();
    for c in 1..=copies as i64 {
        for p in base.points() {
            let mut q = p.clone();
            q.extend(std::iter::repeat_n(Scalar::from_int(c), d - l));
            points.push(q);
        }
    }
    PointSet::new(d, points)
}

/// `V^ℓ ⊂ ℂ^{dℓ}`, lexicographic in the factor indices.
pub fn power(v: &PointSet, l: usize) -> Result<PointSet> {
    if l == 0 {
        return Err(Error::InvalidParameter("power needs l >= 1".into()));
    }
    check_cap((v.len() as u128).checked_pow(l as u32).unwrap_or(u128::MAX))?;
    let mut out: Vec<Vec<Scalar>> = vec![Vec::new()];
    for _ in 0..l {
        let mut next = Vec::with_capacity(out.len() * v.len());
        for prefix in &out {
            for p in v.points() {
                let mut q = prefix.clone();
                q.extend(p.iter().cloned());
                next.push(q);
            }
        }
        out = next;
    }
    PointSet::new(v.dim() * l, out)
}

/// `[r] × V` with `[r] = {0, …, r-1}` prepended as the first coordinate,
/// ordered by the first coordinate and then by the order of `V`.
pub fn lift(v: &PointSet, r: usize) -> Result<PointSet> {
    check_cap((r as u128) * v.len() as u128)?;
    let mut points = Vec::with_capacity(r * v.len());
    for z in 0..r as i64 {
        for p in v.points() {
            let mut q = Vec::with_capacity(p.len() + 1);
            q.push(Scalar::from_int(z));
            q.extend(p.iter().cloned());
            points.push(q);
        }
    }
    PointSet::new(v.dim() + 1, points)
}

/// `{a + t·b : a, b ∈ A}` in increasing order.
pub fn sum_dilate(a: &[Scalar], t: &Scalar) -> Vec<Scalar> {
    let set: BTreeSet<Scalar> = a
        .iter()
        .flat_map(|x| a.iter().map(move |y| x + &(t * y)))
        .collect();
    set.into_iter().collect()
}

/// The sum-product configuration together with its rich-line family.
#[derive(Clone, Debug)]
pub struct SumProductConfig {
    pub points: PointSet,
    /// Lines through `(0, a)` with direction `(1, b)`, `a, b ∈ A^{d-1}`.
    pub lines: Vec<Line>,
    /// Indices of the points of `V_0 = {0} × A^{d-1}`.
    pub v0: Vec<usize>,
}

/// `V = ∪_{t∈Q} {t} × (A+tA)^{d-1}` and the `N^{2d-2}` lines through
/// `V_0 = {0} × A^{d-1}` with directions `{1} × A^{d-1}`.
pub fn sumproduct_config(a: &[Scalar], q: &[Scalar], d: usize) -> Result<SumProductConfig> {
    if d < 2 {
        return Err(Error::InvalidParameter("sum-product configuration needs d >= 2".into()));
    }
    let a: Vec<Scalar> = a.iter().cloned().collect::<BTreeSet<_>>().into_iter().collect();
    let q: Vec<Scalar> = q.iter().cloned().collect::<BTreeSet<_>>().into_iter().collect();
    if a.is_empty() {
        return Err(Error::InvalidParameter("A must be nonempty".into()));
    }
    if !q.iter().any(Zero::is_zero) {
        return Err(Error::InvalidParameter("Q must contain 0".into()));
    }
    let mut total: u128 = 0;
    let mut slices = Vec::with_capacity(q.len());
    for t in &q {
        let s = sum_dilate(&a, t);
        total = total.saturating_add((s.len() as u128).saturating_pow(d as u32 - 1));
        slices.push(s);
    }
    let n_a = a.len() as u128;
    check_cap(total.max(n_a.saturating_pow(d as u32 - 1)))?;
    let mut points = Vec::new();
    for (t, s) in q.iter().zip(&slices) {
        for rest in lex_product(&vec![s.clone(); d - 1]) {
            let mut p = Vec::with_capacity(d);
            p.push(t.clone());
            p.extend(rest);
            points.push(p);
        }
    }
    let points = PointSet::new(d, points)?;
    let index = points.index_map();
    let tuples = lex_product(&vec![a.clone(); d - 1]);
    let mut v0 = Vec::with_capacity(tuples.len());
    for base in &tuples {
        let mut p = vec![Scalar::zero()];
        p.extend(base.iter().cloned());
        v0.push(index[p.as_slice()]);
    }
    let mut lines = Vec::with_capacity(tuples.len() * tuples.len());
    for base in &tuples {
        for dir in &tuples {
            let mut incident: Vec<usize> = q
                .iter()
                .map(|t| {
                    let mut p = Vec::with_capacity(d);
                    p.push(t.clone());
                    p.extend(base.iter().zip(dir).map(|(x, y)| x + &(t * y)));
                    index[p.as_slice()]
                })
                .collect();
            incident.sort_unstable();
            let mut line_base = vec![Scalar::zero()];
            line_base.extend(base.iter().cloned());
            let mut line_dir = vec![Scalar::one()];
            line_dir.extend(dir.iter().cloned());
            lines.push(Line::from_parts(line_dir, line_base, incident));
        }
    }
    Ok(SumProductConfig { points, lines, v0 })
}

/// `n` distinct integer points drawn uniformly from `[-range, range]^d`.
pub fn random_points(d: usize, n: usize, range: i64, seed: u64) -> Result<PointSet> {
    if d == 0 || range < 0 {
        return Err(Error::InvalidParameter("random points need d >= 1 and range >= 0".into()));
    }
    check_cap(n as u128)?;
    let side = (2 * range + 1) as u128;
    if (n as u128) > side.saturating_pow(d as u32) {
        return Err(Error::InvalidParameter(format!(
            "cannot draw {n} distinct points from a box of side {side}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut seen = HashSet::new();
    let mut points = Vec::with_capacity(n);
    while points.len() < n {
        let p: Vec<i64> = (0..d).map(|_| rng.gen_range(-range..=range)).collect();
        if seen.insert(p.clone()) {
            points.push(p.into_iter().map(Scalar::from_int).collect());
        }
    }
    PointSet::new(d, points)
}

/// `count` points on a random line of `ℚ^d` (or `ℚ[i]^d` when `gaussian`),
/// at distinct random parameters.
pub fn random_collinear(d: usize, count: usize, gaussian: bool, seed: u64) -> Result<PointSet> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let coord = |rng: &mut ChaCha8Rng| {
        let re = Scalar::ratio(rng.gen_range(-9..=9), rng.gen_range(1..=4));
        if gaussian {
            &re + &(&Scalar::ratio(rng.gen_range(-9..=9), rng.gen_range(1..=4)) * &Scalar::i())
        } else {
            re
        }
    };
    let base: Vec<Scalar> = (0..d).map(|_| coord(&mut rng)).collect();
    let dir = loop {
        let v: Vec<Scalar> = (0..d).map(|_| coord(&mut rng)).collect();
        if v.iter().any(|x| !Zero::is_zero(x)) {
            break v;
        }
    };
    let mut params: Vec<i64> = (-30..=30).collect();
    params.shuffle(&mut rng);
    let points = params[..count]
        .iter()
        .map(|&t| {
            let t = Scalar::ratio(t, rng.gen_range(1..=3));
            base.iter().zip(&dir).map(|(b, v)| b + &(&t * v)).collect()
        })
        .collect::<Vec<Vec<Scalar>>>();
    // different denominators can collide; fall back to integer parameters
    match PointSet::new(d, points) {
        Ok(p) => Ok(p),
        Err(Error::DuplicatePoint(_)) => PointSet::new(
            d,
            params[..count]
                .iter()
                .map(|&t| {
                    let t = Scalar::from_int(t);
                    base.iter().zip(&dir).map(|(b, v)| b + &(&t * v)).collect()
                })
                .collect(),
        ),
        Err(e) => Err(e),
    }
}

/// Serializable description of a configuration.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum GeneratorSpec {
    Grid {
        d: usize,
        h: usize,
    },
    Pasted {
        d: usize,
        l: usize,
        copies: usize,
        h: usize,
    },
    Power {
        base: Box<GeneratorSpec>,
        l: usize,
    },
    Sumproduct {
        a: Vec<Scalar>,
        q: Vec<Scalar>,
        d: usize,
    },
    Random {
        d: usize,
        n: usize,
        range: i64,
        seed: u64,
    },
}

impl GeneratorSpec {
    pub fn build(&self) -> Result<PointSet> {
        match self {
            GeneratorSpec::Grid { d, h } => grid(*d, *h),
            GeneratorSpec::Pasted { d, l, copies, h } => pasted_grids(*d, *l, *copies, *h),
            GeneratorSpec::Power { base, l } => power(&base.build()?, *l),
            GeneratorSpec::Sumproduct { a, q, d } => Ok(sumproduct_config(a, q, *d)?.points),
            GeneratorSpec::Random { d, n, range, seed } => random_points(*d, *n, *range, *seed),
        }
    }

    /// Short human-readable label used in reports.
    pub fn label(&self) -> String {
        match self {
            GeneratorSpec::Grid { d, h } => format!("grid(d={d},h={h})"),
            GeneratorSpec::Pasted { d, l, copies, h } => {
                format!("pasted(d={d},l={l},copies={copies},h={h})")
            }
            GeneratorSpec::Power { base, l } => format!("power({},l={l})", base.label()),
            GeneratorSpec::Sumproduct { a, q, d } => {
                format!("sumproduct(|A|={},|Q|={},d={d})", a.len(), q.len())
            }
            GeneratorSpec::Random { d, n, range, seed } => {
                format!("random(d={d},n={n},range={range},seed={seed})")
            }
        }
    }
}
