//! Brute-force references used to audit the fast paths.
//!
//! These deliberately avoid canonical line forms: collinearity is decided by
//! vanishing 2×2 minors of difference vectors.

use std::collections::BTreeSet;

use num_traits::Zero;

use crate::config::PointSet;
use crate::scalar::Scalar;

/// `true` when `a`, `b`, `c` are collinear: every 2×2 minor of
/// `(b - a, c - a)` vanishes.
pub fn collinear(a: &[Scalar], b: &[Scalar], c: &[Scalar]) -> bool {
    let u: Vec<Scalar> = b.iter().zip(a).map(|(x, y)| x - y).collect();
    let w: Vec<Scalar> = c.iter().zip(a).map(|(x, y)| x - y).collect();
    for i in 0..u.len() {
        for j in i + 1..u.len() {
            if !(&(&u[i] * &w[j]) - &(&u[j] * &w[i])).is_zero() {
                return false;
            }
        }
    }
    true
}

/// Rich lines by triple collinearity, `O(n^3)`. Each line is returned as its
/// sorted set of incident indices; the result is sorted.
pub fn rich_lines_bruteforce(v: &PointSet, r: usize) -> Vec<Vec<usize>> {
    let n = v.len();
    let mut found: BTreeSet<Vec<usize>> = BTreeSet::new();
    for i in 0..n {
        for j in i + 1..n {
            let on: Vec<usize> = (0..n)
                .filter(|&k| k == i || k == j || collinear(v.point(i), v.point(j), v.point(k)))
                .collect();
            if on.len() >= r {
                found.insert(on);
            }
        }
    }
    found.into_iter().collect()
}

/// Progression count by direct enumeration of start/difference pairs over
/// all ordered pairs, deduplicated as point sets.
pub fn count_aps_bruteforce(v: &PointSet, r: usize) -> usize {
    let n = v.len();
    let mut found: BTreeSet<Vec<usize>> = BTreeSet::new();
    let index = v.index_map();
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let x: Vec<Scalar> = v.point(j).iter().zip(v.point(i)).map(|(a, b)| a - b).collect();
            let mut members = Vec::with_capacity(r);
            for t in 0..r {
                let t = Scalar::from_int(t as i64);
                let p: Vec<Scalar> = v.point(i).iter().zip(&x).map(|(y, d)| y + &(&t * d)).collect();
                match index.get(p.as_slice()) {
                    Some(&k) => members.push(k),
                    None => break,
                }
            }
            if members.len() == r {
                members.sort_unstable();
                found.insert(members);
            }
        }
    }
    found.len()
}
