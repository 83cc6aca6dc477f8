//! Low-degree polynomials vanishing on a point set and the design-matrix
//! certificate that forces one to exist.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow, Zero};
use serde::{Deserialize, Serialize};

use crate::config::PointSet;
use crate::design::{assemble, rank_bound_check, RankBoundReport};
use crate::error::{Error, Result};
use crate::incidence::{line_degrees, rich_lines, Line};
use crate::scalar::{ratio_serde, Scalar};
use crate::veronese::{embed, monomial_count, MonomialBasis, Polynomial};

/// Constants of the hyperplane theorem. `lemma` is fixed at `32(2d)^d`;
/// `theorem` and `conclusion` are configurable with defaults `d^{3d}` and
/// `theorem / 2^11`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Constants {
    pub dim: usize,
    #[serde(with = "ratio_serde")]
    pub lemma: BigRational,
    #[serde(with = "ratio_serde")]
    pub theorem: BigRational,
    #[serde(with = "ratio_serde")]
    pub conclusion: BigRational,
}

impl Constants {
    pub fn new(dim: usize) -> Constants {
        let d = BigInt::from(dim);
        let lemma = BigInt::from(32) * Pow::pow(&(BigInt::from(2) * &d), dim as u32);
        let theorem = Pow::pow(&d, 3 * dim as u32);
        Constants::with_theorem(dim, BigRational::from_integer(lemma), BigRational::from_integer(theorem))
    }

    /// Overrides the theorem constant; the conclusion constant follows it.
    pub fn with_theorem(dim: usize, lemma: BigRational, theorem: BigRational) -> Constants {
        let conclusion = &theorem / BigRational::from_integer(BigInt::from(2048));
        Constants {
            dim,
            lemma,
            theorem,
            conclusion,
        }
    }

    pub fn override_theorem(mut self, theorem: BigRational) -> Constants {
        self.conclusion = &theorem / BigRational::from_integer(BigInt::from(2048));
        self.theorem = theorem;
        self
    }
}

/// Minimal-degree polynomial vanishing on `v`, searching degrees
/// `1..=max_deg` and taking the first kernel vector at the first degree with
/// a nontrivial kernel. The result is checked against every point.
pub fn find_vanishing_poly(v: &PointSet, max_deg: u32) -> Result<Option<Polynomial>> {
    if v.is_empty() {
        // every constant-free polynomial vanishes on the empty set
        return Ok((max_deg >= 1).then(|| Polynomial::variable(v.dim().max(1), 0)));
    }
    for deg in 1..=max_deg {
        let m = embed(v, deg);
        let kernel = m.nullspace();
        if let Some(c) = kernel.into_iter().next() {
            let f = Polynomial::from_dense(&MonomialBasis::new(v.dim(), deg), &c)?;
            if !f.vanishes_on(v) {
                return Err(Error::Invariant("kernel polynomial does not vanish".into()));
            }
            return Ok(Some(f));
        }
    }
    Ok(None)
}

/// Kernel dimension of the degree-`deg` Veronese matrix of `v`.
pub fn vanishing_dimension(v: &PointSet, deg: u32) -> usize {
    let m = embed(v, deg);
    m.cols() - m.rank()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LemmaMode {
    /// Every point on at least `k` rich lines.
    Plain,
    /// Every point on between `k` and `8k` rich lines.
    Bounded,
}

/// Rank facts behind the existence of a vanishing polynomial of degree
/// `r - 2`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub n: usize,
    pub r: usize,
    pub lines: usize,
    /// Minimum and maximum number of rich lines through a point.
    pub k_min: usize,
    pub k_max: usize,
    #[serde(with = "ratio_serde")]
    pub hypothesis_threshold: BigRational,
    pub hypothesis_holds: bool,
    pub tuples: usize,
    pub rank_bounds: RankBoundReport,
    pub rank_veronese: usize,
    /// `m(d, r-2)`.
    pub monomials: usize,
    /// `rank(M) < m(d, r-2)`, i.e. a degree `r-2` polynomial vanishes on `V`.
    pub deficient: bool,
    /// `n - rank(A) < m(d, r-2)`: the design matrix alone forces deficiency.
    pub forced_by_design: bool,
    /// Maximum tuples through a point is at most `16k` and `|R| ≤ 16nk/r`
    /// when the bounded hypothesis holds.
    pub tuple_count_bound_holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LemmaResult {
    pub mode: LemmaMode,
    pub certificate: Certificate,
    /// Minimal-degree vanishing polynomial of degree at most `r - 2`.
    pub polynomial: Option<Polynomial>,
    pub warnings: Vec<String>,
}

/// Runs the design-matrix argument on `v` with its `r`-rich lines.
pub fn lemma_findpoly(v: &PointSet, r: usize, mode: LemmaMode) -> Result<LemmaResult> {
    let lines = rich_lines(v, r)?;
    lemma_findpoly_with_lines(v, r, mode, &lines)
}

/// As [`lemma_findpoly`] with an explicit family of `r`-rich lines.
pub fn lemma_findpoly_with_lines(
    v: &PointSet,
    r: usize,
    mode: LemmaMode,
    lines: &[Line],
) -> Result<LemmaResult> {
    if r < 2 {
        return Err(Error::InvalidParameter("the lemma needs r >= 2".into()));
    }
    if lines.is_empty() {
        return Err(Error::NoRichLines(r));
    }
    if let Some(l) = lines.iter().find(|l| l.len() < r) {
        return Err(Error::InvalidParameter(format!(
            "line with {} points is not {r}-rich",
            l.len()
        )));
    }
    let mut warnings = Vec::new();
    if r < 4 {
        warnings.push(format!("r = {r} is below 4; the lemma's guarantee does not apply"));
    }
    let n = v.len();
    let d = v.dim();
    let degrees = line_degrees(n, lines);
    let k_min = degrees.iter().copied().min().unwrap_or(0);
    let k_max = degrees.iter().copied().max().unwrap_or(0);

    let lemma_const = Constants::new(d).lemma;
    let exponent = match mode {
        LemmaMode::Plain => d as i64 - 2,
        LemmaMode::Bounded => d as i64 - 1,
    };
    let r_pow = pow_signed(r, exponent);
    let hypothesis_threshold = &lemma_const * BigRational::from_integer(BigInt::from(n)) / r_pow;
    let k_rat = BigRational::from_integer(BigInt::from(k_min));
    let mut hypothesis_holds = k_rat >= hypothesis_threshold;
    if mode == LemmaMode::Bounded && k_max > 8 * k_min {
        hypothesis_holds = false;
    }
    if !hypothesis_holds {
        warnings.push("hypothesis not met; the mechanism runs without its guarantee".into());
    }

    let asm = assemble(v, lines, r)?;
    let rank_bounds = rank_bound_check(&asm.design, Some(&asm.veronese));
    if !rank_bounds.all_hold() {
        return Err(Error::Invariant("a rank bound failed on an assembled design".into()));
    }
    let rank_veronese = rank_bounds.rank_veronese.expect("veronese supplied");
    let monomials = asm.veronese.cols();
    debug_assert_eq!(BigInt::from(monomials), monomial_count(d, r - 2));
    let deficient = rank_veronese < monomials;
    let forced_by_design = n - rank_bounds.rank < monomials;

    let tuple_count_bound_holds = if mode == LemmaMode::Bounded && k_min > 0 && k_max <= 8 * k_min {
        // |R| ≤ 16nk/r with k the minimum line count
        asm.design.rows * r <= 16 * n * k_min
    } else {
        true
    };

    let polynomial = find_vanishing_poly(v, (r - 2) as u32)?;
    if polynomial.is_none() && (deficient || forced_by_design) {
        return Err(Error::Invariant(
            "rank certificate predicts a vanishing polynomial but none was found".into(),
        ));
    }
    if polynomial.is_none() {
        warnings.push(format!("no polynomial of degree at most {} vanishes on the set", r - 2));
    }

    Ok(LemmaResult {
        mode,
        certificate: Certificate {
            n,
            r,
            lines: lines.len(),
            k_min,
            k_max,
            hypothesis_threshold,
            hypothesis_holds,
            tuples: asm.design.rows,
            rank_bounds,
            rank_veronese,
            monomials,
            deficient,
            forced_by_design,
            tuple_count_bound_holds,
        },
        polynomial,
        warnings,
    })
}

/// `r^e` for a possibly negative exponent.
pub(crate) fn pow_signed(r: usize, e: i64) -> BigRational {
    let base = BigRational::from_integer(BigInt::from(r));
    if e >= 0 {
        Pow::pow(&base, e as u32)
    } else {
        BigRational::one() / Pow::pow(&base, (-e) as u32)
    }
}

/// `true` when `f` vanishes at parameters `t = 0, …, deg(f)` of `line`,
/// hence identically on it.
pub fn vanishes_on_line(f: &Polynomial, line: &Line) -> bool {
    let deg = f.degree().unwrap_or(0);
    (0..=deg as i64).all(|t| f.eval(&line.point_at(&Scalar::from_int(t))).is_zero())
}
