//! Dense exact matrices with fraction-free rank and Gauss-Jordan kernels,
//! plus a sparse rank for tall sparse matrices.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Row-major dense matrix of exact scalars.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl ExactMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        ExactMatrix {
            rows,
            cols,
            data: vec![Scalar::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = ExactMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Scalar::one();
        }
        m
    }

    /// Builds a matrix from rows; every row must have `cols` entries.
    pub fn from_rows(cols: usize, rows: Vec<Vec<Scalar>>) -> Result<Self> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for row in rows {
            if row.len() != cols {
                return Err(Error::Dimension {
                    expected: cols,
                    found: row.len(),
                });
            }
            data.extend(row);
        }
        Ok(ExactMatrix {
            rows: n,
            cols,
            data,
        })
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|&v| Scalar::from_int(v)).collect())
            .collect();
        ExactMatrix::from_rows(cols, rows).expect("ragged integer matrix")
    }

    /// Builds a matrix from `(row, col, value)` triplets. Later triplets for
    /// the same position overwrite earlier ones.
    pub fn from_triplets(rows: usize, cols: usize, entries: &[(usize, usize, Scalar)]) -> Self {
        let mut m = ExactMatrix::zeros(rows, cols);
        for (i, j, v) in entries {
            m[(*i, *j)] = v.clone();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<Scalar>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> ExactMatrix {
        let mut t = ExactMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    /// Selects a subset of rows, in the given order.
    pub fn select_rows(&self, idx: &[usize]) -> ExactMatrix {
        let rows = idx.iter().map(|&i| self.row(i).to_vec()).collect();
        ExactMatrix::from_rows(self.cols, rows).expect("row width is fixed")
    }

    pub fn mul(&self, other: &ExactMatrix) -> Result<ExactMatrix> {
        if self.cols != other.rows {
            return Err(Error::Dimension {
                expected: self.cols,
                found: other.rows,
            });
        }
        let mut out = ExactMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += &(a * b);
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Result<Vec<Scalar>> {
        if v.len() != self.cols {
            return Err(Error::Dimension {
                expected: self.cols,
                found: v.len(),
            });
        }
        Ok((0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn nonzero_count(&self) -> usize {
        self.data.iter().filter(|x| !x.is_zero()).count()
    }

    /// Exact rank by fraction-free (Bareiss) elimination. Rows are first
    /// scaled to Gaussian integers so every intermediate entry is a minor of
    /// the scaled matrix.
    pub fn rank(&self) -> usize {
        if self.rows == 0 || self.cols == 0 {
            return 0;
        }
        let mut a: Vec<Vec<Scalar>> = (0..self.rows)
            .map(|i| {
                let row = self.row(i);
                let lcm = row
                    .iter()
                    .fold(num_bigint::BigInt::one(), |acc, x| {
                        num_integer::Integer::lcm(&acc, &x.denom_lcm())
                    });
                let s = Scalar::real(num_rational::BigRational::from_integer(lcm));
                row.iter().map(|x| x * &s).collect()
            })
            .filter(|row: &Vec<Scalar>| row.iter().any(|x| !x.is_zero()))
            .collect();
        let rows = a.len();
        let cols = self.cols;
        let mut prev = Scalar::one();
        let mut rank = 0;
        for col in 0..cols {
            if rank == rows {
                break;
            }
            let Some(p) = (rank..rows).find(|&i| !a[i][col].is_zero()) else {
                continue;
            };
            a.swap(rank, p);
            let (top, rest) = a.split_at_mut(rank + 1);
            let pivot_row = &top[rank];
            let pivot = &pivot_row[col];
            for row in rest.iter_mut() {
                let factor = row[col].clone();
                for j in col + 1..cols {
                    let mut v = pivot * &row[j];
                    if !factor.is_zero() && !pivot_row[j].is_zero() {
                        v -= &(&factor * &pivot_row[j]);
                    }
                    row[j] = &v / &prev;
                }
                row[col] = Scalar::zero();
            }
            prev = pivot.clone();
            rank += 1;
        }
        rank
    }

    /// Reduced row echelon form by Gauss-Jordan elimination over the field.
    /// Returns the reduced matrix and the pivot columns in increasing order.
    pub fn rref(&self) -> (ExactMatrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m[(i, c)].is_zero()) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = m[(r, c)].inv().expect("pivot is nonzero");
            for j in c..m.cols {
                if !m[(r, j)].is_zero() {
                    m[(r, j)] = &m[(r, j)] * &inv;
                }
            }
            for i in 0..m.rows {
                if i == r || m[(i, c)].is_zero() {
                    continue;
                }
                let f = m[(i, c)].clone();
                for j in c..m.cols {
                    if !m[(r, j)].is_zero() {
                        let t = &f * &m[(r, j)];
                        m[(i, j)] -= &t;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    /// Basis of the right kernel `{x : M x = 0}`. One vector per free column,
    /// in increasing column order, each scaled so its first nonzero entry is 1.
    pub fn nullspace(&self) -> Vec<Vec<Scalar>> {
        let (r, pivots) = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        (0..self.cols)
            .filter(|&c| !is_pivot[c])
            .map(|free| {
                let mut v = vec![Scalar::zero(); self.cols];
                v[free] = Scalar::one();
                for (row, &p) in pivots.iter().enumerate() {
                    v[p] = -&r[(row, free)];
                }
                normalize_leading(&mut v);
                v
            })
            .collect()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }
}

impl std::ops::Index<(usize, usize)> for ExactMatrix {
    type Output = Scalar;
    fn index(&self, (i, j): (usize, usize)) -> &Scalar {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for ExactMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Scalar {
        &mut self.data[i * self.cols + j]
    }
}

/// Scales `v` so its first nonzero entry is 1. Zero vectors are left alone.
pub fn normalize_leading(v: &mut [Scalar]) {
    if let Some(lead) = v.iter().find(|x| !x.is_zero()).cloned() {
        if lead != Scalar::one() {
            let inv = lead.inv().expect("nonzero");
            for x in v.iter_mut() {
                if !x.is_zero() {
                    *x = &*x * &inv;
                }
            }
        }
    }
}

pub fn dot(a: &[Scalar], b: &[Scalar]) -> Scalar {
    a.iter()
        .zip(b)
        .filter(|(x, y)| !x.is_zero() && !y.is_zero())
        .map(|(x, y)| x * y)
        .sum()
}

/// Exact rank of a list of vectors of equal length.
pub fn rank_of(vectors: &[Vec<Scalar>], dim: usize) -> usize {
    ExactMatrix::from_rows(dim, vectors.to_vec())
        .map(|m| m.rank())
        .unwrap_or(0)
}

/// Exact rank of a sparse matrix given as `(column, value)` rows. Each row is
/// reduced against an echelon basis keyed by leading column, so rows with few
/// nonzeros stay cheap unless elimination fills them in.
pub fn sparse_rank(rows: &[Vec<(usize, Scalar)>]) -> usize {
    let mut basis: HashMap<usize, BTreeMap<usize, Scalar>> = HashMap::new();
    for row in rows {
        let mut cur: BTreeMap<usize, Scalar> = BTreeMap::new();
        for (c, x) in row {
            if !x.is_zero() {
                let e = cur.entry(*c).or_insert_with(Scalar::zero);
                *e += x;
            }
        }
        cur.retain(|_, x| !x.is_zero());
        while let Some((&lead, lead_val)) = cur.iter().next() {
            let Some(b) = basis.get(&lead) else {
                let inv = lead_val.inv().expect("nonzero lead");
                let normalized = cur.into_iter().map(|(c, x)| (c, &x * &inv)).collect();
                basis.insert(lead, normalized);
                break;
            };
            let f = lead_val.clone();
            for (c, x) in b {
                let e = cur.entry(*c).or_insert_with(Scalar::zero);
                *e -= &(&f * x);
                if e.is_zero() {
                    cur.remove(c);
                }
            }
        }
    }
    basis.len()
}

const PRIME: u64 = (1 << 61) - 1;

fn mul_mod(a: u64, b: u64) -> u64 {
    ((u128::from(a) * u128::from(b)) % u128::from(PRIME)) as u64
}

fn pow_mod(mut a: u64, mut e: u64) -> u64 {
    let mut acc = 1;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, a);
        }
        a = mul_mod(a, a);
        e >>= 1;
    }
    acc
}

fn reduce_mod(x: &BigInt) -> u64 {
    let p = BigInt::from(PRIME);
    let r = ((x % &p) + &p) % &p;
    r.to_u64().expect("reduced below the prime")
}

/// Rank of the reduction modulo the prime `2^61 - 1`, which never exceeds the
/// exact rank. `None` when an entry is not real or has a denominator divisible
/// by the prime.
pub fn modular_rank(rows: &[Vec<(usize, Scalar)>], cols: usize) -> Option<usize> {
    let mut basis: Vec<Option<Vec<u64>>> = vec![None; cols];
    let mut rank = 0;
    for row in rows {
        let mut cur = vec![0u64; cols];
        for (c, x) in row {
            if !x.im().is_zero() {
                return None;
            }
            let den = reduce_mod(x.re().denom());
            if den == 0 {
                return None;
            }
            let v = mul_mod(reduce_mod(x.re().numer()), pow_mod(den, PRIME - 2));
            cur[*c] = (cur[*c] + v) % PRIME;
        }
        for lead in 0..cols {
            if cur[lead] == 0 {
                continue;
            }
            match &basis[lead] {
                Some(b) => {
                    let f = cur[lead];
                    for (x, y) in cur.iter_mut().zip(b).skip(lead) {
                        *x = (*x + PRIME - mul_mod(f, *y)) % PRIME;
                    }
                }
                None => {
                    let inv = pow_mod(cur[lead], PRIME - 2);
                    basis[lead] = Some(cur.iter().map(|x| mul_mod(*x, inv)).collect());
                    rank += 1;
                    break;
                }
            }
        }
        if rank == cols {
            break;
        }
    }
    Some(rank)
}
