//! Brute-force reference implementations shared by the integration tests.
//! None of these call into the library beyond its scalar and point-set types.

#![allow(dead_code)]

use std::collections::BTreeSet;

use num_traits::{One, Zero};
use richlines::{PointSet, Scalar};

pub fn s(x: i64) -> Scalar {
    Scalar::from_int(x)
}

pub fn sub(a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// `u` and `w` are parallel when every 2×2 minor vanishes.
pub fn parallel(u: &[Scalar], w: &[Scalar]) -> bool {
    for i in 0..u.len() {
        for j in i + 1..u.len() {
            if &u[i] * &w[j] != &u[j] * &w[i] {
                return false;
            }
        }
    }
    true
}

pub fn collinear(a: &[Scalar], b: &[Scalar], c: &[Scalar]) -> bool {
    parallel(&sub(b, a), &sub(c, a))
}

fn as_integers(v: &PointSet) -> Option<Vec<Vec<i64>>> {
    v.points()
        .iter()
        .map(|p| p.iter().map(Scalar::to_i64).collect())
        .collect()
}

fn collinear_i64(a: &[i64], b: &[i64], c: &[i64]) -> bool {
    let u: Vec<i64> = b.iter().zip(a).map(|(x, y)| x - y).collect();
    let w: Vec<i64> = c.iter().zip(a).map(|(x, y)| x - y).collect();
    (0..u.len()).all(|i| (i + 1..u.len()).all(|j| u[i] * w[j] == u[j] * w[i]))
}

fn maximal_sets(n: usize, r: usize, collinear: impl Fn(usize, usize, usize) -> bool) -> Vec<Vec<usize>> {
    let mut found = BTreeSet::new();
    for i in 0..n {
        for j in i + 1..n {
            let on: Vec<usize> = (0..n).filter(|&k| k == i || k == j || collinear(i, j, k)).collect();
            if on.len() >= r {
                found.insert(on);
            }
        }
    }
    found.into_iter().collect()
}

/// Maximal collinear index sets of size at least `r`, each sorted, the whole
/// list sorted. Cubic in `n`; integer inputs take a machine-word path.
pub fn rich_lines(v: &PointSet, r: usize) -> Vec<Vec<usize>> {
    match as_integers(v) {
        Some(p) => maximal_sets(v.len(), r, |i, j, k| collinear_i64(&p[i], &p[j], &p[k])),
        None => maximal_sets(v.len(), r, |i, j, k| collinear(v.point(i), v.point(j), v.point(k))),
    }
}

/// Rank by plain Gaussian elimination over the field.
pub fn rank(rows: &[Vec<Scalar>]) -> usize {
    let mut m: Vec<Vec<Scalar>> = rows.to_vec();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        let pivot = m[rank][c].clone();
        for i in 0..m.len() {
            if i != rank && !m[i][c].is_zero() {
                let f = &m[i][c] / &pivot;
                let pivot_row = m[rank].clone();
                for (x, y) in m[i].iter_mut().zip(&pivot_row).skip(c) {
                    *x -= &(&f * y);
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Exponent vectors of total degree at most `deg` in `d` variables.
pub fn exponents(d: usize, deg: u32) -> Vec<Vec<u32>> {
    if d == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for first in 0..=deg {
        for mut rest in exponents(d - 1, deg - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

pub fn monomial(p: &[Scalar], e: &[u32]) -> Scalar {
    let mut acc = Scalar::one();
    for (x, &k) in p.iter().zip(e) {
        for _ in 0..k {
            acc = &acc * x;
        }
    }
    acc
}

/// Rows `(p^e)_e` for every point `p` of `v`.
pub fn veronese(v: &PointSet, deg: u32) -> Vec<Vec<Scalar>> {
    let exps = exponents(v.dim(), deg);
    v.points()
        .iter()
        .map(|p| exps.iter().map(|e| monomial(p, e)).collect())
        .collect()
}

pub fn eval_terms(terms: &[(Vec<u32>, Scalar)], p: &[Scalar]) -> Scalar {
    terms.iter().map(|(e, c)| c * &monomial(p, e)).sum()
}

/// Unordered `r`-term progressions with nonzero difference: every ordered
/// pair `(a, a + x)` whose continuation stays in `V`, halved for the sign.
pub fn count_progressions(v: &PointSet, r: usize) -> usize {
    let pts: BTreeSet<&[Scalar]> = v.points().iter().map(Vec::as_slice).collect();
    let mut ordered = 0;
    for a in v.points() {
        for b in v.points() {
            if a == b {
                continue;
            }
            let x = sub(b, a);
            let ok = (2..r).all(|j| {
                let t = s(j as i64);
                let p: Vec<Scalar> = a.iter().zip(&x).map(|(ai, xi)| ai + &(&t * xi)).collect();
                pts.contains(p.as_slice())
            });
            if ok {
                ordered += 1;
            }
        }
    }
    ordered / 2
}

pub fn dot(a: &[Scalar], b: &[Scalar]) -> Scalar {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Largest number of points of `v ⊂ ℚ³` on a common plane, by trying every
/// non-collinear triple.
pub fn max_plane_3d(v: &PointSet) -> usize {
    let n = v.len();
    let mut best = n.min(2);
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let u = sub(v.point(j), v.point(i));
                let w = sub(v.point(k), v.point(i));
                let normal = vec![
                    &(&u[1] * &w[2]) - &(&u[2] * &w[1]),
                    &(&u[2] * &w[0]) - &(&u[0] * &w[2]),
                    &(&u[0] * &w[1]) - &(&u[1] * &w[0]),
                ];
                if normal.iter().all(Zero::is_zero) {
                    continue;
                }
                let c = dot(&normal, v.point(i));
                let on = v.points().iter().filter(|p| dot(&normal, p) == c).count();
                best = best.max(on);
            }
        }
    }
    best
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn loglog_slope(samples: &[(f64, f64)]) -> f64 {
    let pts: Vec<(f64, f64)> = samples.iter().map(|&(x, y)| (x.ln(), y.ln())).collect();
    let m = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / m;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / m;
    let num: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let den: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    num / den
}
