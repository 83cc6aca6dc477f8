//! Seeded property suites run by `verify`.

use std::collections::HashSet;

use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::bounds::loglog_slope;
use crate::config::{grid, lift, pasted_grids, power, random_collinear, random_points, PointSet};
use crate::design::{assemble, random_design_matrix, rank_bound_check, verify_design};
use crate::error::Result;
use crate::incidence::{count_aps, incidences, lift_progressions, line_degrees, oracle, rich_lines, Hyperplane};
use crate::refine::{check_refinement, random_bipartite, refine};
use crate::scalar::Scalar;
use crate::vanishing::hyperplane_from_product;
use crate::veronese::{embed, sz_zero_count, MonomialBasis, Polynomial};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Claims,
    Bounds,
    All,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub seed: u64,
    pub checks: Vec<Check>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

fn check(name: &str, failures: Vec<String>, samples: usize) -> Check {
    Check {
        name: name.to_string(),
        passed: failures.is_empty(),
        detail: if failures.is_empty() {
            format!("{samples} samples")
        } else {
            failures.join("; ")
        },
    }
}

pub fn run_suite(suite: Suite, seed: u64) -> Result<SuiteReport> {
    let mut checks = Vec::new();
    if matches!(suite, Suite::Claims | Suite::All) {
        checks.push(collinear_rank_check(seed, 30)?);
        checks.push(tuple_design_check()?);
        checks.push(refinement_check(seed, 50)?);
        checks.push(progression_lift_check(seed, 10)?);
        checks.push(progression_square_check(seed, 10)?);
        checks.push(product_slice_check(seed, 10)?);
    }
    if matches!(suite, Suite::Bounds | Suite::All) {
        checks.push(generated_rank_check(seed, 50));
        checks.push(zero_count_check(seed, 50)?);
        checks.push(oracle_check(seed, 10)?);
        checks.push(grid_slope_check()?);
    }
    Ok(SuiteReport { suite, seed, checks })
}

/// `r + 2` collinear points have Veronese images of rank `r + 1` at degree
/// `r`, and every `r + 1` of them are independent.
pub fn collinear_rank_check(seed: u64, samples: usize) -> Result<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = Vec::new();
    for s in 0..samples {
        let r = rng.gen_range(2..=6);
        let d = rng.gen_range(2..=3);
        let gaussian = rng.gen_bool(0.3);
        let v = random_collinear(d, r + 2, gaussian, rng.gen())?;
        let m = embed(&v, r as u32);
        if m.rank() != r + 1 {
            failures.push(format!("sample {s}: rank {}", m.rank()));
            continue;
        }
        for skip in 0..r + 2 {
            let keep: Vec<usize> = (0..r + 2).filter(|&i| i != skip).collect();
            if m.select_rows(&keep).rank() != r + 1 {
                failures.push(format!("sample {s}: dependent subset without {skip}"));
            }
        }
    }
    Ok(check("collinear Veronese rank", failures, samples))
}

/// Tuple covers and design parameters on small grids.
pub fn tuple_design_check() -> Result<Check> {
    let mut failures = Vec::new();
    let sets = [("grid(2,4)", grid(2, 4)?), ("grid(3,3)", grid(3, 3)?), ("pasted(3,2,2,3)", pasted_grids(3, 2, 2, 3)?)];
    for (name, v) in &sets {
        let r = 3;
        let lines = rich_lines(v, r)?;
        let asm = assemble(v, &lines, r)?;
        if !asm.design.mul_dense(&asm.veronese)?.is_zero() {
            failures.push(format!("{name}: A·M ≠ 0"));
        }
        let degrees = line_degrees(v.len(), &lines);
        let mult = asm.design.cover.point_multiplicity(v.len());
        if degrees.iter().zip(&mult).any(|(dl, m)| m < dl) {
            failures.push(format!("{name}: a point is in too few tuples"));
        }
        if asm.design.cover.max_pair_multiplicity() > 2 {
            failures.push(format!("{name}: pair in more than two tuples"));
        }
        let rep = verify_design(&asm.design);
        if !rep.violations.is_empty() {
            failures.push(format!("{name}: {}", rep.violations.join(", ")));
        }
        if !rank_bound_check(&asm.design, Some(&asm.veronese)).all_hold() {
            failures.push(format!("{name}: rank bound violated"));
        }
    }
    Ok(check("tuple covers and design matrices", failures, sets.len()))
}

pub fn refinement_check(seed: u64, samples: usize) -> Result<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = Vec::new();
    let mut tried = 0;
    for s in 0..samples {
        let g = random_bipartite(rng.gen_range(1..=40), rng.gen_range(1..=40), rng.gen_range(0.02..0.6), rng.gen());
        if g.edges.is_empty() {
            continue;
        }
        tried += 1;
        let res = refine(&g)?;
        let bad = check_refinement(&g, &res);
        if !bad.is_empty() {
            failures.push(format!("graph {s}: {}", bad.join(", ")));
        }
        let again = refine(&res.induced())?;
        if again.left != res.left || again.right != res.right {
            failures.push(format!("graph {s}: not idempotent"));
        }
    }
    Ok(check("bipartite refinement", failures, tried))
}

/// A seeded set of distinct integers drawn from `[-range, range]`.
pub fn random_line_set(rng: &mut ChaCha8Rng, size: usize, range: i64) -> PointSet {
    let mut pool: Vec<i64> = (-range..=range).collect();
    pool.shuffle(rng);
    PointSet::new(1, pool[..size].iter().map(|&x| vec![Scalar::from_int(x)]).collect())
        .expect("distinct values")
}

/// Progressions lift injectively to rich lines of `[r] × V`.
pub fn progression_lift_check(seed: u64, samples: usize) -> Result<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = Vec::new();
    for s in 0..samples {
        let r = rng.gen_range(3..=4);
        let size = rng.gen_range(5..=10);
        let v = random_line_set(&mut rng, size, 8);
        let (count, aps) = count_aps(&v, r)?;
        let lifted = lift(&v, r)?;
        let rich = rich_lines(&lifted, r)?;
        let images = lift_progressions(&v, &aps);
        let distinct: HashSet<_> = images.iter().collect();
        if distinct.len() != count {
            failures.push(format!("set {s}: lifting is not injective"));
        }
        if count > rich.len() {
            failures.push(format!("set {s}: {count} progressions but {} rich lines", rich.len()));
        }
        if images.iter().any(|l| !rich.contains(l)) {
            failures.push(format!("set {s}: lifted line is not rich"));
        }
    }
    Ok(check("progressions lift to rich lines", failures, samples))
}

/// Progressions in `V²` are at least the square of those in `V`.
pub fn progression_square_check(seed: u64, samples: usize) -> Result<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    let mut failures = Vec::new();
    for s in 0..samples {
        let r = rng.gen_range(3..=4);
        let size = rng.gen_range(4..=8);
        let v = random_line_set(&mut rng, size, 6);
        let base = count_aps(&v, r)?.0;
        let square = count_aps(&power(&v, 2)?, r)?.0;
        if square < base * base {
            failures.push(format!("set {s}: {square} < {base}²"));
        }
    }
    Ok(check("progressions in the square", failures, samples))
}

/// A random hyperplane of `ℂ^{2d}` through a point of `V²`.
pub fn random_product_hyperplane(rng: &mut ChaCha8Rng, v: &PointSet) -> Hyperplane {
    let d = v.dim();
    let sq = power(v, 2).expect("small set");
    loop {
        let normal: Vec<Scalar> = (0..2 * d).map(|_| Scalar::from_int(rng.gen_range(-2..=2))).collect();
        if normal.iter().all(Zero::is_zero) {
            continue;
        }
        let p = sq.point(rng.gen_range(0..sq.len()));
        return Hyperplane::through(normal, p).expect("nonzero normal");
    }
}

pub fn product_slice_check(seed: u64, samples: usize) -> Result<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x27);
    let mut failures = Vec::new();
    for s in 0..samples {
        let d = rng.gen_range(1..=2);
        let v = random_points(d, rng.gen_range(3..=7), 3, rng.gen())?;
        let h = random_product_hyperplane(&mut rng, &v);
        match hyperplane_from_product(&h, &v, 2) {
            Ok(slice) if slice.density_bound_holds(v.len()) => {}
            Ok(_) => failures.push(format!("instance {s}: below density")),
            Err(e) => failures.push(format!("instance {s}: {e}")),
        }
    }
    Ok(check("hyperplane slices of products", failures, samples))
}

pub fn generated_rank_check(seed: u64, samples: usize) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xa11);
    let mut failures = Vec::new();
    for s in 0..samples {
        let cols = rng.gen_range(4..=14);
        let a = random_design_matrix(rng.gen_range(1..=30), cols, rng.gen_range(2..=3), rng.gen_range(1..=2), rng.gen());
        let rb = rank_bound_check(&a, None);
        if !rb.all_hold() {
            failures.push(format!("matrix {s}: rank {}", rb.rank));
        }
    }
    check("rank bounds on generated design matrices", failures, samples)
}

/// A seeded nonzero polynomial of degree at most `deg`: either a product of
/// linear factors with roots in `s` (many zeros) or random integer
/// coefficients. With `homogeneous` every term has the same degree.
pub fn random_polynomial(rng: &mut ChaCha8Rng, d: usize, deg: u32, s: &[Scalar], homogeneous: bool) -> Polynomial {
    let deg = deg.max(1);
    if rng.gen_bool(0.6) {
        let mut f = Polynomial::constant(d, Scalar::from_int(1));
        for _ in 0..rng.gen_range(1..=deg) {
            let i = rng.gen_range(0..d);
            let factor = if homogeneous {
                let j = (i + 1) % d;
                let c = s.choose(rng).expect("nonempty").clone();
                Polynomial::variable(d, i).sub(&Polynomial::variable(d, j).scale(&c))
            } else {
                let c = s.choose(rng).expect("nonempty").clone();
                Polynomial::variable(d, i).sub(&Polynomial::constant(d, c))
            };
            f = f.mul(&factor);
        }
        if !f.is_zero() {
            return f;
        }
    }
    loop {
        let top = rng.gen_range(1..=deg);
        let basis = MonomialBasis::new(d, top);
        let mut terms = Vec::new();
        for m in basis.monomials() {
            if (!homogeneous || m.degree() == top) && rng.gen_bool(0.5) {
                terms.push((m.0.clone(), Scalar::from_int(rng.gen_range(-3..=3))));
            }
        }
        let f = Polynomial::from_terms(d, terms).expect("matching dimension");
        if !f.is_zero() {
            return f;
        }
    }
}

pub fn zero_count_check(seed: u64, samples: usize) -> Result<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x52);
    let mut failures = Vec::new();
    for s in 0..samples {
        let d = rng.gen_range(2..=3);
        let size = rng.gen_range(2..=8);
        let set: Vec<Scalar> = (0..size as i64).map(Scalar::from_int).collect();
        let deg = rng.gen_range(1..=4);
        let f = random_polynomial(&mut rng, d, deg, &set, false);
        let z = sz_zero_count(&f, &set, false)?;
        if !z.within_bound() {
            failures.push(format!("poly {s}: {} zeros > {}", z.zeros, z.bound));
        }
        let g = random_polynomial(&mut rng, d, deg, &set, true);
        let z = sz_zero_count(&g, &set, true)?;
        if !z.within_bound() {
            failures.push(format!("homogeneous poly {s}: {} zeros > {}", z.zeros, z.bound));
        }
    }
    Ok(check("zero counts on grids", failures, samples))
}

pub fn oracle_check(seed: u64, samples: usize) -> Result<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x0c);
    let mut failures = Vec::new();
    for s in 0..samples {
        let d = rng.gen_range(2..=3);
        let v = random_points(d, rng.gen_range(5..=40), 3, rng.gen())?;
        for r in 2..=4 {
            let fast: Vec<Vec<usize>> = rich_lines(&v, r)?.iter().map(|l| l.incident().to_vec()).collect();
            if fast != oracle::rich_lines_bruteforce(&v, r) {
                failures.push(format!("set {s}, r = {r}"));
            }
        }
        incidences(&v, &rich_lines(&v, 2)?)?;
    }
    Ok(check("rich lines against the brute-force oracle", failures, samples))
}

/// Slope of `log |L_3(grid(2,h))|` against `log n` for `h = 10, 20, 30`.
pub fn grid_slope_check() -> Result<Check> {
    let mut samples = Vec::new();
    for h in [10, 20, 30] {
        let g = grid(2, h)?;
        samples.push((g.len(), rich_lines(&g, 3)?.len()));
    }
    let slope = loglog_slope(&samples).unwrap_or(f64::NAN);
    let ok = (1.7..=2.3).contains(&slope);
    Ok(Check {
        name: "grid rich-line growth".into(),
        passed: ok,
        detail: format!("slope {slope:.4} over {samples:?}"),
    })
}
