//! Upper-bound formulas for rich-line counts and the flat statistics they
//! depend on.
//!
//! Every term is an exact rational with no constant applied; reports show
//! measured counts divided by each term.

use std::collections::{BTreeMap, HashSet};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::config::PointSet;
use crate::error::{Error, Result};
use crate::incidence::max_hyperplane_subset;
use crate::linalg::{rank_of, ExactMatrix};
use crate::scalar::{ratio_serde, Scalar};

/// Calls `f` with every `k`-subset of `0..n` in lexicographic order.
fn for_each_subset(n: usize, k: usize, f: &mut impl FnMut(&[usize])) {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
        if cur.len() == k {
            f(cur);
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, f);
            cur.pop();
        }
    }
    rec(0, n, k, &mut Vec::with_capacity(k), f);
}

/// Largest number of points of `v` on one `l`-flat (`1 ≤ l < d`).
pub fn max_flat_subset(v: &PointSet, l: usize) -> Result<usize> {
    let d = v.dim();
    if l == 0 || l >= d {
        return Err(Error::InvalidParameter(format!("flat dimension must be in 1..{d}")));
    }
    let n = v.len();
    if n == 0 {
        return Ok(0);
    }
    let p0 = v.point(0);
    let hull: Vec<Vec<Scalar>> = v.points()[1..]
        .iter()
        .map(|p| p.iter().zip(p0).map(|(a, b)| a - b).collect())
        .collect();
    if rank_of(&hull, d) <= l {
        return Ok(n);
    }
    if l + 1 == d {
        return Ok(max_hyperplane_subset(v).0);
    }
    let mut seen: HashSet<Vec<Vec<Scalar>>> = HashSet::new();
    let mut best = l.min(n);
    for_each_subset(n, l + 1, &mut |idx| {
        let base = v.point(idx[0]);
        let diffs: Vec<Vec<Scalar>> = idx[1..]
            .iter()
            .map(|&i| v.point(i).iter().zip(base).map(|(a, b)| a - b).collect())
            .collect();
        let m = ExactMatrix::from_rows(d, diffs.clone()).expect("fixed width");
        let (reduced, pivots) = m.rref();
        if pivots.len() != l {
            return;
        }
        // the direction space plus the base reduced against it identify the flat
        let mut key: Vec<Vec<Scalar>> = (0..l).map(|i| reduced.row(i).to_vec()).collect();
        let mut b = base.to_vec();
        for (row, &p) in pivots.iter().enumerate() {
            let c = b[p].clone();
            if !c.is_zero() {
                for (x, y) in b.iter_mut().zip(reduced.row(row)) {
                    *x -= &(&c * y);
                }
            }
        }
        key.push(b);
        if !seen.insert(key) {
            return;
        }
        let count = v
            .points()
            .iter()
            .filter(|x| {
                let mut e = diffs.clone();
                e.push(x.iter().zip(base).map(|(a, b)| a - b).collect());
                rank_of(&e, d) == l
            })
            .count();
        best = best.max(count);
    });
    Ok(best)
}

/// `s_l` for every `1 ≤ l < d`.
pub fn flat_counts(v: &PointSet) -> Result<BTreeMap<usize, usize>> {
    (1..v.dim()).map(|l| Ok((l, max_flat_subset(v, l)?))).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Term {
    pub name: String,
    #[serde(with = "ratio_serde")]
    pub value: BigRational,
}

/// Names of the composite bounds, in report order.
pub const BOUND_NAMES: [&str; 6] = ["planar", "grid", "hyperplane", "space3", "space4", "flats"];

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundTerms {
    pub n: usize,
    pub r: usize,
    pub d: usize,
    /// Individual summands.
    pub terms: Vec<Term>,
    /// Composite right-hand sides; absent when a needed `s_l` is unknown.
    pub bounds: Vec<Term>,
}

impl BoundTerms {
    pub fn term(&self, name: &str) -> Option<&BigRational> {
        self.terms.iter().find(|t| t.name == name).map(|t| &t.value)
    }

    pub fn bound(&self, name: &str) -> Option<&BigRational> {
        self.bounds.iter().find(|t| t.name == name).map(|t| &t.value)
    }

    /// `measured / bound` for every composite bound.
    pub fn ratios(&self, measured: usize) -> Vec<Term> {
        let m = BigRational::from_integer(BigInt::from(measured));
        self.bounds
            .iter()
            .filter(|t| !t.value.is_zero())
            .map(|t| Term {
                name: t.name.clone(),
                value: &m / &t.value,
            })
            .collect()
    }
}

fn q(x: usize) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

fn pow(x: usize, e: usize) -> BigRational {
    num_traits::Pow::pow(&q(x), e as u32)
}

/// All bound terms for `n` points in dimension `d` at richness `r`, given
/// whichever flat counts `s` are known.
///
/// * planar: `n²/r³ + n/r`
/// * grid: `n²/r^{d+1} + n/r`
/// * hyperplane: `n²/r^d + n s_{d-1}/r²`
/// * space3: `n²/r⁴ + n s₂/r³ + n/r`
/// * space4: `n²/r⁵ + n s₃/r⁴ + n s₂/r³ + n/r`
/// * flats: `n²/r^{d+1} + Σ_{l=2}^{d-1} n s_l/r^{l+1} + n/r`
pub fn bound_terms(n: usize, r: usize, d: usize, s: &BTreeMap<usize, usize>) -> Result<BoundTerms> {
    if r < 2 {
        return Err(Error::InvalidParameter("bounds need r >= 2".into()));
    }
    if d == 0 {
        return Err(Error::InvalidParameter("dimension must be positive".into()));
    }
    let n2 = pow(n, 2);
    let t = |name: &str, value: BigRational| Term {
        name: name.to_string(),
        value,
    };
    let mut terms = vec![
        t("n^2/r^3", &n2 / pow(r, 3)),
        t("n/r", q(n) / q(r)),
        t("n^2/r^4", &n2 / pow(r, 4)),
        t("n^2/r^5", &n2 / pow(r, 5)),
        t("n^2/r^d", &n2 / pow(r, d)),
        t("n^2/r^(d+1)", &n2 / pow(r, d + 1)),
    ];
    let s_term = |l: usize, e: usize| s.get(&l).map(|&sl| q(n) * q(sl) / pow(r, e));
    if d >= 2 {
        if let Some(v) = s_term(d - 1, 2) {
            terms.push(t("n*s_(d-1)/r^2", v));
        }
    }
    if let Some(v) = s_term(2, 3) {
        terms.push(t("n*s_2/r^3", v));
    }
    if let Some(v) = s_term(3, 4) {
        terms.push(t("n*s_3/r^4", v));
    }
    let flat_sum: Option<BigRational> = (2..d).map(|l| s_term(l, l + 1)).sum();
    if let Some(v) = &flat_sum {
        terms.push(t("sum_l n*s_l/r^(l+1)", v.clone()));
    }

    let get = |name: &str| terms.iter().find(|x| x.name == name).map(|x| x.value.clone());
    let nr = get("n/r").expect("present");
    let mut bounds = vec![
        t("planar", get("n^2/r^3").expect("present") + &nr),
        t("grid", get("n^2/r^(d+1)").expect("present") + &nr),
    ];
    if let Some(v) = get("n*s_(d-1)/r^2") {
        bounds.push(t("hyperplane", get("n^2/r^d").expect("present") + v));
    }
    if let Some(s2) = get("n*s_2/r^3") {
        bounds.push(t("space3", get("n^2/r^4").expect("present") + &s2 + &nr));
        if let Some(s3) = get("n*s_3/r^4") {
            bounds.push(t("space4", get("n^2/r^5").expect("present") + s3 + s2 + &nr));
        }
    }
    if let Some(v) = flat_sum {
        bounds.push(t("flats", get("n^2/r^(d+1)").expect("present") + v + &nr));
    }
    Ok(BoundTerms {
        n,
        r,
        d,
        terms,
        bounds,
    })
}

/// Decimal rendering with `digits` significant digits.
pub fn decimal(x: &BigRational, digits: usize) -> String {
    let f = x.to_f64().unwrap_or(f64::NAN);
    sig_digits(f, digits)
}

pub fn sig_digits(f: f64, digits: usize) -> String {
    if f == 0.0 {
        return "0".into();
    }
    if !f.is_finite() {
        return f.to_string();
    }
    let exp = f.abs().log10().floor() as i32;
    if (-5..digits as i32).contains(&exp) {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        let s = format!("{f:.decimals$}");
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s
        }
    } else {
        format!("{:.*e}", digits - 1, f)
    }
}

/// Least-squares slope of `log y` against `log x`; `None` with fewer than two
/// distinct `x` or any nonpositive value.
pub fn loglog_slope(points: &[(usize, usize)]) -> Option<f64> {
    if points.iter().any(|&(x, y)| x == 0 || y == 0) {
        return None;
    }
    let xs: Vec<f64> = points.iter().map(|&(x, _)| (x as f64).ln()).collect();
    let ys: Vec<f64> = points.iter().map(|&(_, y)| (y as f64).ln()).collect();
    let k = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / k;
    let my = ys.iter().sum::<f64>() / k;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    Some(sxy / sxx)
}
