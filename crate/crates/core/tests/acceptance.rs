//! Acceptance criteria. Runs as a plain binary (`harness = false`) so every
//! criterion prints one PASS/FAIL line whether or not it fails. Expected
//! values come from the brute-force references in `common`, not from the
//! library under test.

mod common;

use std::collections::{BTreeSet, HashSet};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use richlines::config::{grid, lift, pasted_grids, power, random_points, sumproduct_config};
use richlines::design::{assemble, random_design_matrix, DesignMatrix};
use richlines::harness::suites::random_polynomial;
use richlines::incidence::{count_aps, incidences, lift_progressions, rich_lines};
use richlines::refine::{random_bipartite, refine};
use richlines::vanishing::{classify_flat_points, extract_hyperplane, find_vanishing_poly, hyperplane_from_product, Constants};
use richlines::veronese::{embed, Polynomial};
use richlines::{Hyperplane, PointSet, Scalar};

use common::*;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn line_sets(v: &PointSet, r: usize) -> Result<Vec<Vec<usize>>, String> {
    let mut out: Vec<Vec<usize>> = rich_lines(v, r).map_err(err)?.iter().map(|l| l.incident().to_vec()).collect();
    out.sort();
    Ok(out)
}

fn at_least(lines: &[Vec<usize>], r: usize) -> Vec<Vec<usize>> {
    lines.iter().filter(|l| l.len() >= r).cloned().collect()
}

const ORACLE_BUDGET: Duration = Duration::from_secs(30);
const COLLINEAR_BUDGET: Duration = Duration::from_secs(60);

fn oracle_equivalence() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut compared = 0;
    for s in 0..50 {
        let d = if s % 2 == 0 { 2 } else { 3 };
        let range: i64 = rng.gen_range(2..=4);
        // small boxes keep many points collinear
        let n = rng.gen_range(5..=60usize.min((2 * range as usize + 1).pow(d as u32)));
        let v = random_points(d, n, range, rng.gen()).map_err(err)?;
        let all = rich_lines_oracle(&v);
        for r in 2..=5 {
            ensure(line_sets(&v, r)? == at_least(&all, r), || format!("random set {s} (d={d}, n={n}) at r={r}"))?;
            compared += 1;
        }
    }
    for d in [2, 3] {
        for h in 1..=6 {
            let g = grid(d, h).map_err(err)?;
            let all = rich_lines_oracle(&g);
            for r in 2..=h.max(2) {
                ensure(line_sets(&g, r)? == at_least(&all, r), || format!("grid({d},{h}) at r={r}"))?;
                compared += 1;
            }
        }
    }
    let took = start.elapsed();
    ensure(took < ORACLE_BUDGET, || format!("took {took:?}"))?;
    Ok(format!("{compared} (set, r) pairs identical in {:.1}s", took.as_secs_f64()))
}

fn rich_lines_oracle(v: &PointSet) -> Vec<Vec<usize>> {
    common::rich_lines(v, 2)
}

fn grid_counts() -> Outcome {
    let small = rich_lines(&grid(2, 3).map_err(err)?, 3).map_err(err)?.len();
    ensure(small == 8, || format!("|L_3(grid(2,3))| = {small}"))?;
    let g = grid(2, 10).map_err(err)?;
    let all = rich_lines_oracle(&g);
    let mut counts = Vec::new();
    for r in 3..=5 {
        let got = line_sets(&g, r)?;
        ensure(got == at_least(&all, r), || format!("grid(2,10) at r={r}"))?;
        counts.push(got.len());
    }
    let mut samples = Vec::new();
    for h in [10, 20, 30] {
        let g = grid(2, h).map_err(err)?;
        samples.push((g.len() as f64, rich_lines(&g, 3).map_err(err)?.len() as f64));
    }
    let slope = loglog_slope(&samples);
    ensure((1.7..=2.3).contains(&slope), || format!("slope {slope:.4}"))?;
    Ok(format!("grid(2,10) counts {counts:?} match the oracle, slope {slope:.4}"))
}

fn collinear_points(rng: &mut ChaCha8Rng, d: usize, count: usize, gaussian: bool) -> PointSet {
    let coord = |rng: &mut ChaCha8Rng| {
        let re = Scalar::ratio(rng.gen_range(-7..=7), rng.gen_range(1..=3));
        if gaussian {
            &re + &(&Scalar::from_int(rng.gen_range(-3..=3)) * &Scalar::i())
        } else {
            re
        }
    };
    let base: Vec<Scalar> = (0..d).map(|_| coord(rng)).collect();
    let dir: Vec<Scalar> = loop {
        let v: Vec<Scalar> = (0..d).map(|_| coord(rng)).collect();
        if v.iter().any(|x| !x.is_zero()) {
            break v;
        }
    };
    let mut ts: Vec<i64> = (-20..=20).collect();
    ts.shuffle(rng);
    let points = ts[..count]
        .iter()
        .map(|&t| base.iter().zip(&dir).map(|(b, x)| b + &(&s(t) * x)).collect())
        .collect();
    PointSet::new(d, points).expect("distinct parameters give distinct points")
}

fn collinear_rank() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for sample in 0..100 {
        let r = 2 + sample % 5;
        let d = 2 + (sample / 5) % 2;
        let v = collinear_points(&mut rng, d, r + 2, sample % 7 == 0);
        let m = embed(&v, r as u32);
        let reference = veronese(&v, r as u32);
        ensure(m.rank() == r + 1 && rank(&reference) == r + 1, || {
            format!("sample {sample}: rank {} (reference {})", m.rank(), rank(&reference))
        })?;
        for skip in 0..r + 2 {
            let keep: Vec<usize> = (0..r + 2).filter(|&i| i != skip).collect();
            let rows: Vec<Vec<Scalar>> = keep.iter().map(|&i| reference[i].clone()).collect();
            ensure(m.select_rows(&keep).rank() == r + 1 && rank(&rows) == r + 1, || {
                format!("sample {sample}: subset without {skip} is dependent")
            })?;
        }
    }
    let took = start.elapsed();
    ensure(took < COLLINEAR_BUDGET, || format!("took {took:?}"))?;
    Ok(format!("100 samples, r in 2..=6, d in {{2,3}}, {:.1}s", took.as_secs_f64()))
}

/// `(q, k, t)` measured from the sparse entries.
fn measure(a: &DesignMatrix) -> (usize, usize, usize) {
    let mut supports: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); a.cols];
    let mut q = 0;
    for (i, row) in a.entries.iter().enumerate() {
        let nz: Vec<usize> = row.iter().filter(|(_, x)| !x.is_zero()).map(|(c, _)| *c).collect();
        q = q.max(nz.len());
        for c in nz {
            supports[c].insert(i);
        }
    }
    let k = supports.iter().map(BTreeSet::len).min().unwrap_or(0);
    let mut t = 0;
    for a in 0..supports.len() {
        for b in a + 1..supports.len() {
            t = t.max(supports[a].intersection(&supports[b]).count());
        }
    }
    (q, k, t)
}

fn dense(a: &DesignMatrix) -> Vec<Vec<Scalar>> {
    let mut m = vec![vec![Scalar::zero(); a.cols]; a.rows];
    for (i, row) in a.entries.iter().enumerate() {
        for (c, x) in row {
            m[i][*c] = x.clone();
        }
    }
    m
}

/// Both rank inequalities in integer form.
fn rank_bounds_hold(rank: usize, m: usize, n: usize, (q, k, t): (usize, usize, usize)) -> bool {
    if k == 0 {
        return true;
    }
    let (rank, m, n, q, k, t) = (rank as i128, m as i128, n as i128, q as i128, k as i128, t as i128);
    rank * k >= n * k - n * t * q * q && rank * k * k >= n * k * k - m * t * q * q
}

fn design_suite() -> Outcome {
    let r = 3;
    let mut details = Vec::new();
    for (name, v) in [("grid(2,4)", grid(2, 4).map_err(err)?), ("grid(3,3)", grid(3, 3).map_err(err)?)] {
        let lines = rich_lines(&v, r).map_err(err)?;
        let asm = assemble(&v, &lines, r).map_err(err)?;
        let a = dense(&asm.design);
        let m = veronese(&v, (r - 2) as u32);
        for (i, row) in a.iter().enumerate() {
            for col in 0..m[0].len() {
                let x: Scalar = row.iter().zip(&m).map(|(aij, mj)| aij * &mj[col]).sum();
                ensure(x.is_zero(), || format!("{name}: (A·M)[{i}][{col}] = {x}"))?;
            }
        }
        let params = measure(&asm.design);
        ensure(params.0 <= r && params.2 <= 2, || format!("{name}: measured {params:?}"))?;
        for (li, tuples) in asm.design.cover.per_line.iter().enumerate() {
            let pts: BTreeSet<usize> = tuples.iter().flatten().copied().collect();
            ensure(pts == lines[li].incident().iter().copied().collect(), || format!("{name}: line {li} not covered"))?;
            for &a in &pts {
                for &b in pts.range(a + 1..) {
                    let c = tuples.iter().filter(|t| t.contains(&a) && t.contains(&b)).count();
                    ensure(c <= 2, || format!("{name}: pair ({a},{b}) in {c} tuples"))?;
                }
            }
        }
        let rk = rank(&a);
        ensure(rank_bounds_hold(rk, asm.design.rows, v.len(), params), || format!("{name}: rank {rk}, {params:?}"))?;
        details.push(format!("{name} {}x{} rank {rk}", a.len(), v.len()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for i in 0..100 {
        let cols = rng.gen_range(4..=16);
        let q = rng.gen_range(2..=4.min(cols));
        let a = random_design_matrix(rng.gen_range(1..=40), cols, q, rng.gen_range(1..=3), rng.gen());
        let params = measure(&a);
        let rk = rank(&dense(&a));
        ensure(rank_bounds_hold(rk, a.rows, a.cols, params), || format!("generated matrix {i}: rank {rk}, {params:?}"))?;
    }
    details.push("100 generated matrices".into());
    Ok(details.join(", "))
}

fn refinement_suite() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut pruned = 0;
    for i in 0..500 {
        let g = loop {
            let g = random_bipartite(rng.gen_range(1..=40), rng.gen_range(1..=40), rng.gen_range(0.05..0.7), rng.gen());
            if !g.edges.is_empty() {
                break g;
            }
        };
        let res = refine(&g).map_err(err)?;
        let e = g.edges.len();
        let all: HashSet<_> = g.edges.iter().collect();
        ensure(res.edges.iter().all(|x| all.contains(x)), || format!("graph {i}: new edge"))?;
        ensure(2 * res.edges.len() >= e, || format!("graph {i}: kept {} of {e}", res.edges.len()))?;
        for &a in &res.left {
            let deg = res.edges.iter().filter(|x| x.0 == a).count();
            ensure(4 * g.left.len() * deg >= e, || format!("graph {i}: left {a} has degree {deg}"))?;
        }
        for &b in &res.right {
            let deg = res.edges.iter().filter(|x| x.1 == b).count();
            ensure(4 * g.right.len() * deg >= e, || format!("graph {i}: right {b} has degree {deg}"))?;
        }
        ensure(res.edges.iter().all(|(a, b)| res.left.contains(a) && res.right.contains(b)), || {
            format!("graph {i}: edge at a removed vertex")
        })?;
        let again = refine(&res.induced()).map_err(err)?;
        ensure(again.edges == res.edges && again.left == res.left && again.right == res.right, || {
            format!("graph {i}: second pass changed the graph")
        })?;
        pruned += usize::from(res.edges.len() < e);
    }
    Ok(format!("500 graphs, {pruned} pruned"))
}

fn circle() -> Outcome {
    let mut pts = Vec::new();
    for x in -5i64..=5 {
        for y in -5i64..=5 {
            if x * x + y * y == 25 {
                pts.push(vec![s(x), s(y)]);
            }
        }
    }
    let v = PointSet::new(2, pts).map_err(err)?;
    ensure(v.len() == 12, || format!("{} points", v.len()))?;
    let m1 = veronese(&v, 1);
    let m2 = veronese(&v, 2);
    ensure(m1[0].len() - rank(&m1) == 0, || "a line holds the circle".into())?;
    let kernel = m2[0].len() - rank(&m2);
    ensure(kernel == 1, || format!("kernel dimension {kernel}"))?;
    let f = find_vanishing_poly(&v, 2).map_err(err)?.ok_or("no polynomial")?;
    ensure(f.degree() == Some(2), || format!("degree {:?}", f.degree()))?;
    let target: Vec<(Vec<u32>, Scalar)> = vec![(vec![2, 0], s(1)), (vec![0, 2], s(1)), (vec![0, 0], s(-25))];
    let scale = &f.coefficient(&[2, 0]) / &s(1);
    let terms: Vec<(Vec<u32>, Scalar)> = f.terms().map(|(m, c)| (m.0.clone(), c.clone())).collect();
    ensure(terms.len() == 3, || format!("{} terms", terms.len()))?;
    for (e, c) in &target {
        ensure(f.coefficient(e) == &scale * c, || format!("coefficient of {e:?}"))?;
    }
    ensure(v.points().iter().all(|p| eval_terms(&terms, p).is_zero()), || "f is nonzero at a point".into())?;
    Ok(format!("kernel dimension 1, f = {scale}·(x1² + x2² - 25)"))
}

fn coordinate_planes() -> Outcome {
    let mut pts = Vec::new();
    for x in -2i64..=2 {
        for y in -2i64..=2 {
            for z in -2i64..=2 {
                if x * y * z == 0 {
                    pts.push(vec![s(x), s(y), s(z)]);
                }
            }
        }
    }
    let v = PointSet::new(3, pts).map_err(err)?;
    // a line off the planes meets each plane once, so 4-rich lines lie in them
    let lines = rich_lines(&v, 4).map_err(err)?;
    let f = Polynomial::from_i64_terms(3, &[(&[1, 1, 1], 1)]);
    let classes = classify_flat_points(&v, &lines, &f).map_err(err)?;
    let (mut flat, mut joints) = (0, 0);
    for c in &classes {
        let p = v.point(c.point);
        let zeros = p.iter().filter(|x| x.is_zero()).count();
        if zeros == 1 {
            ensure(c.is_flat(), || format!("point {p:?} should be flat"))?;
            flat += 1;
        } else {
            ensure(!c.is_flat(), || format!("point {p:?} should be a joint"))?;
            let grad = [&p[1] * &p[2], &p[0] * &p[2], &p[0] * &p[1]];
            ensure(grad.iter().all(Zero::is_zero), || format!("reference gradient nonzero at {p:?}"))?;
            ensure(c.gradient.iter().all(Zero::is_zero), || format!("gradient nonzero at {p:?}"))?;
            joints += 1;
        }
    }
    ensure(flat == 48 && joints == 13, || format!("{flat} flat, {joints} joints"))?;
    Ok(format!("{} lines, {flat} flat points, {joints} joints", lines.len()))
}

fn pasted_pipeline() -> Outcome {
    let v = pasted_grids(3, 2, 2, 4).map_err(err)?;
    let ex = extract_hyperplane(&v, 4, &Constants::new(3)).map_err(err)?;
    let h = ex.hyperplane.ok_or("no hyperplane")?;
    let on: Vec<usize> = (0..v.len()).filter(|&i| dot(h.normal(), v.point(i)) == *h.offset()).collect();
    let best = max_plane_3d(&v);
    ensure(on == ex.subset, || "subset differs from the points on the hyperplane".into())?;
    ensure(on.len() == 16 && best == 16, || format!("{} points, best plane {best}", on.len()))?;
    Ok(format!("hyperplane holds {} of {} points, best plane holds {best}", on.len(), v.len()))
}

fn integer_set(rng: &mut ChaCha8Rng, size: usize, range: i64) -> PointSet {
    let mut pool: Vec<i64> = (-range..=range).collect();
    pool.shuffle(rng);
    PointSet::new(1, pool[..size].iter().map(|&x| vec![s(x)]).collect()).expect("distinct")
}

fn progression_suite() -> Outcome {
    let interval = PointSet::new(1, (1..=10).map(|x| vec![s(x)]).collect()).map_err(err)?;
    let (count, _) = count_aps(&interval, 3).map_err(err)?;
    let reference = count_progressions(&interval, 3);
    ensure(count == 20 && reference == 20, || format!("{count} progressions (reference {reference})"))?;

    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for i in 0..20 {
        let r = 3 + i % 2;
        let size = rng.gen_range(5..=10);
        let v = integer_set(&mut rng, size, 8);
        let (count, aps) = count_aps(&v, r).map_err(err)?;
        ensure(count == count_progressions(&v, r), || format!("set {i}: count {count}"))?;
        let lifted = lift(&v, r).map_err(err)?;
        let rich = common::rich_lines(&lifted, r);
        ensure(count <= rich.len(), || format!("set {i}: {count} > {}", rich.len()))?;
        let images = lift_progressions(&v, &aps);
        let distinct: HashSet<Vec<usize>> = images.iter().map(|l| l.incident().to_vec()).collect();
        ensure(distinct.len() == count, || format!("set {i}: lifting not injective"))?;
        ensure(distinct.iter().all(|l| rich.contains(l)), || format!("set {i}: image is not a rich line"))?;
    }
    for i in 0..20 {
        let r = 3 + i % 2;
        let size = rng.gen_range(4..=7);
        let v = integer_set(&mut rng, size, 6);
        let base = count_progressions(&v, r);
        let sq = power(&v, 2).map_err(err)?;
        let square = count_progressions(&sq, r);
        ensure(square >= base * base, || format!("set {i}: {square} < {base}²"))?;
        ensure(count_aps(&sq, r).map_err(err)?.0 == square, || format!("set {i}: library count differs in V²"))?;
    }
    Ok("count 20 on {1..10}; 20 lifting sets; 20 square sets".into())
}

fn product_slices() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    for i in 0..20 {
        let d = 1 + i % 2;
        let v = random_points(d, rng.gen_range(3..=7), 3, rng.gen()).map_err(err)?;
        let n = v.len();
        let sq = power(&v, 2).map_err(err)?;
        let normal: Vec<Scalar> = loop {
            let x: Vec<Scalar> = (0..2 * d).map(|_| s(rng.gen_range(-2..=2))).collect();
            if x.iter().any(|c| !c.is_zero()) {
                break x;
            }
        };
        let through = sq.point(rng.gen_range(0..sq.len()));
        let offset = dot(&normal, through);
        let hits = sq.points().iter().filter(|p| dot(&normal, p) == offset).count();
        let h = Hyperplane::new(normal, offset).map_err(err)?;
        let slice = hyperplane_from_product(&h, &v, 2).map_err(err)?;
        let hp = &slice.hyperplane;
        let size = v.points().iter().filter(|p| dot(hp.normal(), p) == *hp.offset()).count();
        // |H' ∩ V| ≥ δ n with δ = hits / n²
        ensure(size * n >= hits, || format!("instance {i}: {size} points, density {hits}/{}", n * n))?;
    }
    Ok("20 instances".into())
}

fn zero_counts() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut worst = (0u64, 1u64);
    for i in 0..200 {
        let d = 2 + i % 2;
        let size = rng.gen_range(2..=8);
        let mut pool: Vec<i64> = (-6..=6).collect();
        pool.shuffle(&mut rng);
        let set: Vec<Scalar> = pool[..size].iter().map(|&x| s(x)).collect();
        let deg = rng.gen_range(1..=4);
        for homogeneous in [false, true] {
            let f = random_polynomial(&mut rng, d, deg, &set, homogeneous);
            let r = u64::from(f.degree().ok_or("zero polynomial")?);
            let terms: Vec<(Vec<u32>, Scalar)> = f.terms().map(|(m, c)| (m.0.clone(), c.clone())).collect();
            let free = if homogeneous { d - 1 } else { d };
            let mut zeros = 0u64;
            for idx in 0..size.pow(free as u32) {
                let mut p = if homogeneous { vec![s(1)] } else { Vec::new() };
                let mut rest = idx;
                for _ in 0..free {
                    p.push(set[rest % size].clone());
                    rest /= size;
                }
                zeros += u64::from(eval_terms(&terms, &p).is_zero());
            }
            let bound = r * (size as u64).pow(free as u32 - 1);
            ensure(zeros <= bound, || format!("polynomial {i} (homogeneous {homogeneous}): {zeros} > {bound}"))?;
            if zeros * worst.1 > worst.0 * bound {
                worst = (zeros, bound);
            }
        }
    }
    Ok(format!("400 polynomials, tightest {}/{}", worst.0, worst.1))
}

fn sumproduct() -> Outcome {
    let a: Vec<Scalar> = (1..=3).map(s).collect();
    let q: Vec<Scalar> = (0..=2).map(s).collect();
    let cfg = sumproduct_config(&a, &q, 2).map_err(err)?;
    let n = a.len();
    ensure(cfg.lines.len() == n.pow(2), || format!("{} lines", cfg.lines.len()))?;
    let distinct: HashSet<_> = cfg.lines.iter().collect();
    ensure(distinct.len() == cfg.lines.len(), || "repeated line".into())?;
    let v0: HashSet<usize> = cfg.v0.iter().copied().collect();
    for (i, line) in cfg.lines.iter().enumerate() {
        let on: Vec<usize> = (0..cfg.points.len())
            .filter(|&j| parallel(&sub(cfg.points.point(j), line.base()), line.dir()))
            .collect();
        ensure(on.len() == q.len(), || format!("line {i} holds {} points", on.len()))?;
        ensure(on == line.incident(), || format!("line {i}: stored incidences differ"))?;
        let hits = on.iter().filter(|j| v0.contains(j)).count();
        ensure(hits == 1, || format!("line {i} meets V0 {hits} times"))?;
    }
    let g = incidences(&cfg.points, &cfg.lines).map_err(err)?;
    ensure(g.edges.len() == n.pow(2) * q.len(), || format!("{} incidences", g.edges.len()))?;
    Ok(format!("{} lines, each {}-rich, one point of V0 each", cfg.lines.len(), q.len()))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 12] = [
        ("rich-line oracle equivalence", oracle_equivalence),
        ("grid line counts and growth", grid_counts),
        ("collinear Veronese rank", collinear_rank),
        ("design matrices and rank bounds", design_suite),
        ("bipartite refinement", refinement_suite),
        ("vanishing polynomial of a circle", circle),
        ("flat points and joints on coordinate planes", coordinate_planes),
        ("hyperplane pipeline on pasted grids", pasted_pipeline),
        ("arithmetic progressions", progression_suite),
        ("hyperplane slices of products", product_slices),
        ("zero counts on grids", zero_counts),
        ("sum-product configuration", sumproduct),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {detail}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
