//! Monomial bases, the Veronese embedding and sparse multivariate
//! polynomials.
//!
//! Monomials are ordered graded-lexicographically: by total degree, then
//! lexicographically with `x_1` the most significant variable, so that
//! `φ_{2,2}(a_1, a_2) = (1, a_1, a_2, a_1², a_1 a_2, a_2²)`.

use std::cmp::Ordering;
use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_integer::binomial;
use num_rational::BigRational;
use num_traits::{One, Pow, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::config::PointSet;
use crate::error::{Error, Result};
use crate::linalg::ExactMatrix;
use crate::scalar::Scalar;

/// Exponent vector with graded-lex ordering.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn constant(dim: usize) -> Monomial {
        Monomial(vec![0; dim])
    }

    pub fn eval(&self, a: &[Scalar]) -> Scalar {
        let mut acc = Scalar::one();
        for (x, &e) in a.iter().zip(&self.0) {
            if e > 0 {
                acc = &acc * &x.pow(e);
            }
        }
        acc
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| other.0.cmp(&self.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// `m(d, r) = C(d + r, d)`, the number of monomials of degree at most `r` in
/// `d` variables.
pub fn monomial_count(d: usize, r: usize) -> BigInt {
    binomial(BigInt::from(d + r), BigInt::from(d))
}

/// Checks `m(d, r) ≥ (r/d)^d` exactly.
pub fn monomial_count_lower_bound_holds(d: usize, r: usize) -> bool {
    if d == 0 {
        return true;
    }
    let lhs = BigRational::from_integer(monomial_count(d, r));
    let rhs = Pow::pow(
        BigRational::new(BigInt::from(r), BigInt::from(d)),
        d as u32,
    );
    lhs >= rhs
}

/// All monomials of degree `≤ degree` in `dim` variables, in graded-lex order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialBasis {
    dim: usize,
    degree: u32,
    monomials: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
}

fn push_exponents(dim: usize, remaining: u32, prefix: &mut Vec<u32>, out: &mut Vec<Monomial>) {
    if prefix.len() + 1 == dim {
        prefix.push(remaining);
        out.push(Monomial(prefix.clone()));
        prefix.pop();
        return;
    }
    for e in (0..=remaining).rev() {
        prefix.push(e);
        push_exponents(dim, remaining - e, prefix, out);
        prefix.pop();
    }
}

impl MonomialBasis {
    pub fn new(dim: usize, degree: u32) -> MonomialBasis {
        let mut monomials = Vec::new();
        if dim == 0 {
            monomials.push(Monomial(Vec::new()));
        } else {
            for k in 0..=degree {
                push_exponents(dim, k, &mut Vec::with_capacity(dim), &mut monomials);
            }
        }
        let index = monomials
            .iter()
            .enumerate()
            .map(|(i, m)| (m.clone(), i))
            .collect();
        MonomialBasis {
            dim,
            degree,
            monomials,
            index,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn monomials(&self) -> &[Monomial] {
        &self.monomials
    }

    pub fn position(&self, m: &Monomial) -> Option<usize> {
        self.index.get(m).copied()
    }

    /// `φ_{d,r}(a)`: every basis monomial evaluated at `a`.
    pub fn evaluate(&self, a: &[Scalar]) -> Vec<Scalar> {
        // powers[i][e] = a_i^e
        let powers: Vec<Vec<Scalar>> = a
            .iter()
            .map(|x| {
                let mut p = Vec::with_capacity(self.degree as usize + 1);
                p.push(Scalar::one());
                for e in 1..=self.degree as usize {
                    let next = &p[e - 1] * x;
                    p.push(next);
                }
                p
            })
            .collect();
        self.monomials
            .iter()
            .map(|m| {
                let mut acc = Scalar::one();
                for (i, &e) in m.0.iter().enumerate() {
                    if e > 0 {
                        acc = &acc * &powers[i][e as usize];
                    }
                }
                acc
            })
            .collect()
    }
}

/// The `n × m(d, r)` matrix whose rows are `φ_{d,r}(v_i)`.
pub fn embed(v: &PointSet, r: u32) -> ExactMatrix {
    let basis = MonomialBasis::new(v.dim(), r);
    let rows = v.points().iter().map(|p| basis.evaluate(p)).collect();
    ExactMatrix::from_rows(basis.len(), rows).expect("basis width is fixed")
}

/// Sparse polynomial: monomial → nonzero coefficient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polynomial {
    dim: usize,
    terms: BTreeMap<Monomial, Scalar>,
}

impl Polynomial {
    pub fn zero(dim: usize) -> Polynomial {
        Polynomial {
            dim,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(dim: usize, c: Scalar) -> Polynomial {
        Polynomial::from_terms(dim, vec![(vec![0; dim], c)]).expect("valid constant")
    }

    /// The coordinate function `x_i` (0-based).
    pub fn variable(dim: usize, i: usize) -> Polynomial {
        let mut e = vec![0; dim];
        e[i] = 1;
        Polynomial::from_terms(dim, vec![(e, Scalar::one())]).expect("valid variable")
    }

    /// Sums repeated monomials and drops zero coefficients.
    pub fn from_terms(dim: usize, terms: Vec<(Vec<u32>, Scalar)>) -> Result<Polynomial> {
        let mut out = Polynomial::zero(dim);
        for (e, c) in terms {
            if e.len() != dim {
                return Err(Error::Dimension {
                    expected: dim,
                    found: e.len(),
                });
            }
            out.add_term(Monomial(e), &c);
        }
        Ok(out)
    }

    pub fn from_i64_terms(dim: usize, terms: &[(&[u32], i64)]) -> Polynomial {
        Polynomial::from_terms(
            dim,
            terms
                .iter()
                .map(|(e, c)| (e.to_vec(), Scalar::from_int(*c)))
                .collect(),
        )
        .expect("well-formed integer polynomial")
    }

    /// The polynomial `f_w` whose coefficient on basis monomial `j` is `w_j`.
    pub fn from_dense(basis: &MonomialBasis, coeffs: &[Scalar]) -> Result<Polynomial> {
        if coeffs.len() != basis.len() {
            return Err(Error::Dimension {
                expected: basis.len(),
                found: coeffs.len(),
            });
        }
        let mut out = Polynomial::zero(basis.dim());
        for (m, c) in basis.monomials().iter().zip(coeffs) {
            out.add_term(m.clone(), c);
        }
        Ok(out)
    }

    /// Coefficient vector in `basis`; fails if a term is outside the basis.
    pub fn to_dense(&self, basis: &MonomialBasis) -> Result<Vec<Scalar>> {
        let mut v = vec![Scalar::zero(); basis.len()];
        for (m, c) in &self.terms {
            let i = basis.position(m).ok_or_else(|| {
                Error::InvalidParameter(format!("monomial {:?} outside the basis", m.0))
            })?;
            v[i] = c.clone();
        }
        Ok(v)
    }

    fn add_term(&mut self, m: Monomial, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
            Entry::Vacant(e) => {
                e.insert(c.clone());
            }
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, exp: &[u32]) -> Scalar {
        self.terms
            .get(&Monomial(exp.to_vec()))
            .cloned()
            .unwrap_or_else(Scalar::zero)
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(Monomial::degree);
        match degs.next() {
            Some(first) => degs.all(|d| d == first),
            None => true,
        }
    }

    /// Direct evaluation, monomial by monomial.
    pub fn eval(&self, a: &[Scalar]) -> Scalar {
        assert_eq!(a.len(), self.dim, "point dimension mismatch");
        self.terms.iter().map(|(m, c)| c * &m.eval(a)).sum()
    }

    pub fn vanishes_on(&self, v: &PointSet) -> bool {
        v.points().iter().all(|p| self.eval(p).is_zero())
    }

    pub fn scale(&self, s: &Scalar) -> Polynomial {
        let mut out = Polynomial::zero(self.dim);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), &(c * s));
        }
        out
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c);
        }
        out
    }

    pub fn sub(&self, other: &Polynomial) -> Polynomial {
        self.add(&other.scale(&-Scalar::one()))
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero(self.dim);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                let e = m1.0.iter().zip(&m2.0).map(|(a, b)| a + b).collect();
                out.add_term(Monomial(e), &(c1 * c2));
            }
        }
        out
    }

    /// Formal partial derivative in variable `i` (0-based).
    pub fn partial(&self, i: usize) -> Polynomial {
        let mut out = Polynomial::zero(self.dim);
        for (m, c) in &self.terms {
            let e = m.0[i];
            if e == 0 {
                continue;
            }
            let mut exp = m.0.clone();
            exp[i] -= 1;
            out.add_term(Monomial(exp), &(c * &Scalar::from_int(e as i64)));
        }
        out
    }

    /// `∇f` as `d` polynomials.
    pub fn gradient(&self) -> Vec<Polynomial> {
        (0..self.dim).map(|i| self.partial(i)).collect()
    }

    /// `∇f(a)`.
    pub fn gradient_at(&self, a: &[Scalar]) -> Vec<Scalar> {
        self.gradient().iter().map(|g| g.eval(a)).collect()
    }

    /// The top-degree homogeneous component `f̃`.
    pub fn homogeneous_part(&self) -> Result<Polynomial> {
        let top = self.degree().ok_or(Error::ZeroPolynomial)?;
        Ok(Polynomial {
            dim: self.dim,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() == top)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        })
    }

    /// Coefficients (constant term first) of the univariate polynomial
    /// `g(t) = f(a + t·b)`.
    pub fn restrict_to_line(&self, a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
        let deg = self.degree().unwrap_or(0) as usize;
        let mut out = vec![Scalar::zero(); deg + 1];
        // powers[i][e] = (a_i + t b_i)^e as coefficient vectors
        let max_e = deg;
        let powers: Vec<Vec<Vec<Scalar>>> = a
            .iter()
            .zip(b)
            .map(|(ai, bi)| {
                let lin = vec![ai.clone(), bi.clone()];
                let mut p = vec![vec![Scalar::one()]];
                for e in 1..=max_e {
                    let next = poly_mul_1d(&p[e - 1], &lin);
                    p.push(next);
                }
                p
            })
            .collect();
        for (m, c) in &self.terms {
            let mut acc = vec![c.clone()];
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    acc = poly_mul_1d(&acc, &powers[i][e as usize]);
                }
            }
            for (k, v) in acc.into_iter().enumerate() {
                out[k] += &v;
            }
        }
        while out.len() > 1 && out.last().is_some_and(Zero::is_zero) {
            out.pop();
        }
        out
    }
}

fn poly_mul_1d(a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    let mut out = vec![Scalar::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if !y.is_zero() {
                out[i + j] += &(x * y);
            }
        }
    }
    out
}

#[derive(Serialize, Deserialize)]
struct TermRepr {
    exp: Vec<u32>,
    coef: Scalar,
}

#[derive(Serialize, Deserialize)]
struct PolynomialRepr {
    dim: usize,
    terms: Vec<TermRepr>,
}

impl Serialize for Polynomial {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PolynomialRepr {
            dim: self.dim,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| TermRepr {
                    exp: m.0.clone(),
                    coef: c.clone(),
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Polynomial {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = PolynomialRepr::deserialize(d)?;
        Polynomial::from_terms(
            repr.dim,
            repr.terms.into_iter().map(|t| (t.exp, t.coef)).collect(),
        )
        .map_err(serde::de::Error::custom)
    }
}

/// Result of a Schwartz–Zippel zero census.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZeroCount {
    pub zeros: u64,
    pub degree: u32,
    pub grid_size: u64,
    /// `deg·|S|^{d-1}`, or `deg·|S|^{d-2}` for the homogeneous slice.
    pub bound: u64,
}

impl ZeroCount {
    pub fn within_bound(&self) -> bool {
        self.zeros <= self.bound
    }
}

/// Counts zeros of `f` on `S^d`, or on `{1} × S^{d-1}` when
/// `homogeneous_slice` is set, and reports the Schwartz–Zippel bound.
pub fn sz_zero_count(f: &Polynomial, s: &[Scalar], homogeneous_slice: bool) -> Result<ZeroCount> {
    let deg = f.degree().ok_or(Error::ZeroPolynomial)?;
    let d = f.dim();
    let k = s.len() as u64;
    let (free, exponent) = if homogeneous_slice {
        if !f.is_homogeneous() {
            return Err(Error::NotHomogeneous);
        }
        if d < 2 {
            return Err(Error::InvalidParameter("slice mode needs d >= 2".into()));
        }
        (d - 1, d as u32 - 2)
    } else {
        if d == 0 {
            return Err(Error::InvalidParameter("need at least one variable".into()));
        }
        (d, d as u32 - 1)
    };
    let total = k.pow(free as u32);
    let mut zeros = 0u64;
    for code in 0..total {
        let mut p = Vec::with_capacity(d);
        if homogeneous_slice {
            p.push(Scalar::one());
        }
        // mixed-radix digits, most significant coordinate first
        let mut rest = code;
        let mut digits = vec![0usize; free];
        for slot in digits.iter_mut().rev() {
            *slot = (rest % k) as usize;
            rest /= k;
        }
        p.extend(digits.iter().map(|&i| s[i].clone()));
        if f.eval(&p).is_zero() {
            zeros += 1;
        }
    }
    Ok(ZeroCount {
        zeros,
        degree: deg,
        grid_size: total,
        bound: deg as u64 * k.pow(exponent),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::dot;
    use crate::scalar::int_vec;

    #[test]
    fn counts() {
        assert_eq!(monomial_count(2, 2), BigInt::from(6));
        assert_eq!(monomial_count(5, 0), BigInt::from(1));
        assert_eq!(monomial_count(1, 7), BigInt::from(8));
        for d in 1..5 {
            for r in 0..12 {
                assert!(monomial_count_lower_bound_holds(d, r));
                assert_eq!(BigInt::from(MonomialBasis::new(d, r as u32).len()), monomial_count(d, r));
            }
        }
    }

    #[test]
    fn veronese_order() {
        let b = MonomialBasis::new(2, 2);
        let exps: Vec<Vec<u32>> = b.monomials().iter().map(|m| m.0.clone()).collect();
        assert_eq!(exps, vec![vec![0, 0], vec![1, 0], vec![0, 1], vec![2, 0], vec![1, 1], vec![0, 2]]);
        assert_eq!(b.evaluate(&int_vec(&[2, 3])), int_vec(&[1, 2, 3, 4, 6, 9]));
        assert_eq!(MonomialBasis::new(3, 0).evaluate(&int_vec(&[4, 5, 6])), int_vec(&[1]));
    }

    #[test]
    fn embed_collinear_rank() {
        let v = PointSet::from_i64(2, &[&[0, 1], &[1, 3], &[2, 5], &[3, 7]]).unwrap();
        assert_eq!(embed(&v, 2).rank(), 3);
    }

    #[test]
    fn evaluation_examples() {
        let z = Polynomial::zero(2);
        assert!(z.eval(&int_vec(&[3, 4])).is_zero());
        let circle = Polynomial::from_i64_terms(2, &[(&[2, 0], 1), (&[0, 2], 1), (&[0, 0], -25)]);
        assert!(circle.eval(&int_vec(&[3, 4])).is_zero());
        let xy = Polynomial::from_i64_terms(2, &[(&[1, 1], 1)]);
        assert_eq!(xy.eval(&[Scalar::from_int(2), Scalar::ratio(3, 2)]), Scalar::from_int(3));
    }

    #[test]
    fn eval_matches_inner_product() {
        let f = Polynomial::from_i64_terms(3, &[(&[2, 1, 0], 3), (&[0, 0, 3], -2), (&[1, 0, 0], 5), (&[0, 0, 0], 7)]);
        let basis = MonomialBasis::new(3, 3);
        let w = f.to_dense(&basis).unwrap();
        for p in [int_vec(&[1, 2, 3]), int_vec(&[-2, 0, 5]), vec![Scalar::ratio(1, 3), Scalar::i(), Scalar::one()]] {
            assert_eq!(f.eval(&p), dot(&w, &basis.evaluate(&p)));
        }
        assert_eq!(Polynomial::from_dense(&basis, &w).unwrap(), f);
    }

    #[test]
    fn gradient_examples() {
        let circle = Polynomial::from_i64_terms(2, &[(&[2, 0], 1), (&[0, 2], 1), (&[0, 0], -25)]);
        let g = circle.gradient();
        assert_eq!(g[0], Polynomial::from_i64_terms(2, &[(&[1, 0], 2)]));
        assert_eq!(g[1], Polynomial::from_i64_terms(2, &[(&[0, 1], 2)]));
        let c = Polynomial::constant(3, Scalar::from_int(4));
        assert!(c.gradient().iter().all(Polynomial::is_zero));
    }

    #[test]
    fn homogeneous_part_examples() {
        let circle = Polynomial::from_i64_terms(2, &[(&[2, 0], 1), (&[0, 2], 1), (&[0, 0], -25)]);
        assert_eq!(
            circle.homogeneous_part().unwrap(),
            Polynomial::from_i64_terms(2, &[(&[2, 0], 1), (&[0, 2], 1)])
        );
        let h = Polynomial::from_i64_terms(2, &[(&[1, 1], 3), (&[2, 0], 1)]);
        assert_eq!(h.homogeneous_part().unwrap(), h);
        assert!(matches!(Polynomial::zero(2).homogeneous_part(), Err(Error::ZeroPolynomial)));

        let f = Polynomial::from_i64_terms(2, &[(&[1, 1], 1), (&[1, 0], 1), (&[0, 0], 7)]);
        let g = f.restrict_to_line(&int_vec(&[0, 0]), &int_vec(&[1, 1]));
        assert_eq!(g, int_vec(&[7, 1, 1]));
        assert_eq!(g[2], f.homogeneous_part().unwrap().eval(&int_vec(&[1, 1])));
    }

    #[test]
    fn zero_count_examples() {
        let s = int_vec(&[1, 2, 3]);
        let diag = Polynomial::from_i64_terms(2, &[(&[1, 0], 1), (&[0, 1], -1)]);
        let z = sz_zero_count(&diag, &s, false).unwrap();
        assert_eq!((z.zeros, z.bound, z.grid_size), (3, 3, 9));

        let no_roots = Polynomial::from_i64_terms(1, &[(&[2], 1), (&[0], 1)]);
        let z = sz_zero_count(&no_roots, &int_vec(&[-3, -1, 0, 1, 2]), false).unwrap();
        assert_eq!(z.zeros, 0);

        let s5 = int_vec(&[1, 2, 3, 4, 5]);
        let z = sz_zero_count(&diag, &s5, true).unwrap();
        assert_eq!((z.zeros, z.bound, z.grid_size), (1, 1, 5));

        assert!(matches!(sz_zero_count(&Polynomial::zero(2), &s, false), Err(Error::ZeroPolynomial)));
        let mixed = Polynomial::from_i64_terms(2, &[(&[1, 0], 1), (&[0, 0], 1)]);
        assert!(matches!(sz_zero_count(&mixed, &s, true), Err(Error::NotHomogeneous)));
    }

    #[test]
    fn json_shape() {
        let f = Polynomial::from_terms(2, vec![(vec![1, 0], Scalar::ratio(1, 2)), (vec![0, 0], Scalar::from_int(-3))]).unwrap();
        let s = serde_json::to_string(&f).unwrap();
        assert_eq!(s, r#"{"dim":2,"terms":[{"exp":[0,0],"coef":"-3/1"},{"exp":[1,0],"coef":"1/2"}]}"#);
        let back: Polynomial = serde_json::from_str(&s).unwrap();
        assert_eq!(back, f);
    }
}
