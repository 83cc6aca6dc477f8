//! Configured sweeps over generated point sets with deterministic JSON and
//! CSV reports.

use std::collections::BTreeMap;
use std::path::PathBuf;

use num_rational::BigRational;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::bounds::{bound_terms, decimal, flat_counts, loglog_slope, sig_digits, BoundTerms, Term, BOUND_NAMES};
use super::suites::Check;
use crate::config::{sumproduct_config, sum_dilate, GeneratorSpec, PointSet};
use crate::design::{assemble, rank_bound_check, verify_design};
use crate::error::{Error, Result};
use crate::incidence::{count_aps, incidences, line_degrees, oracle, rich_lines};
use crate::scalar::{ratio_serde, Scalar};
use crate::vanishing::{extract_hyperplane, find_vanishing_poly, Constants, PipelineTrace};

/// Largest set audited against the brute-force line oracle.
pub const ORACLE_LIMIT: usize = 60;
/// Largest set for which flat statistics are computed.
pub const FLAT_LIMIT: usize = 100;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PipelineKind {
    Progressions,
    Design,
    Vanishing,
    Hyperplane,
    Sumproduct,
}

/// Dilation-set experiment: `T = {t : |A + tA| ≤ |A|²/c}` among the
/// candidates, points `∪_{t∈T} {t} × (A + tA)` and the `|A|²` lines
/// `{(z, a + z a')}`, each `|T|`-rich.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DilationSpec {
    pub a: Vec<Scalar>,
    pub candidates: Vec<Scalar>,
    #[serde(with = "ratio_serde")]
    pub c: BigRational,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub id: String,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub configs: Vec<GeneratorSpec>,
    #[serde(default)]
    pub r_values: Vec<usize>,
    #[serde(default)]
    pub pipelines: Vec<PipelineKind>,
    /// Overrides the theorem constant (as `p/q`).
    #[serde(default, with = "crate::scalar::opt_ratio_serde")]
    pub theorem_constant: Option<BigRational>,
    #[serde(default)]
    pub dilation: Option<DilationSpec>,
    #[serde(default)]
    pub out_json: Option<PathBuf>,
    #[serde(default)]
    pub out_csv: Option<PathBuf>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DesignSummary {
    pub tuples: usize,
    pub q: usize,
    pub k: usize,
    pub t: usize,
    pub rank: usize,
    pub rank_veronese: Option<usize>,
    pub bounds_hold: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Row {
    pub config: String,
    pub n: usize,
    pub d: usize,
    pub r: usize,
    pub lines: usize,
    pub incidences: usize,
    pub max_on_line: usize,
    /// `s_l` for `1 ≤ l < d`, when computed.
    pub flats: Option<BTreeMap<usize, usize>>,
    pub oracle_agrees: Option<bool>,
    pub progressions: Option<usize>,
    pub design: Option<DesignSummary>,
    pub vanishing_degree: Option<u32>,
    pub hyperplane: Option<PipelineTrace>,
    pub bounds: BoundTerms,
    pub ratios: Vec<Term>,
    pub checks: Vec<Check>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Slope {
    pub r: usize,
    pub samples: Vec<(usize, usize)>,
    /// Decimal rendering of the least-squares slope of `log |L_r|` against
    /// `log n`.
    pub slope: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DilationReport {
    pub dilations: Vec<Scalar>,
    pub points: usize,
    pub lines: usize,
    pub r: usize,
    pub rich_lines: Option<usize>,
    pub bounds: Option<BoundTerms>,
    pub checks: Vec<Check>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub id: String,
    pub seed: u64,
    pub version: String,
    pub config: ExperimentConfig,
    pub rows: Vec<Row>,
    pub slopes: Vec<Slope>,
    pub dilation: Option<DilationReport>,
    pub passed: bool,
}

impl Report {
    pub fn checks(&self) -> impl Iterator<Item = &Check> {
        self.rows
            .iter()
            .flat_map(|r| r.checks.iter())
            .chain(self.dilation.iter().flat_map(|d| d.checks.iter()))
    }
}

fn check(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Check {
    Check {
        name: name.into(),
        passed,
        detail: detail.into(),
    }
}

fn run_row(cfg: &ExperimentConfig, spec: &GeneratorSpec, v: &PointSet, r: usize) -> Result<Row> {
    let n = v.len();
    let d = v.dim();
    let lines = rich_lines(v, r)?;
    let graph = incidences(v, &lines)?;
    let max_on_line = lines.iter().map(|l| l.len()).max().unwrap_or(0);
    let mut checks = Vec::new();

    let oracle_agrees = (n <= ORACLE_LIMIT).then(|| {
        let fast: Vec<Vec<usize>> = lines.iter().map(|l| l.incident().to_vec()).collect();
        fast == oracle::rich_lines_bruteforce(v, r)
    });
    if let Some(ok) = oracle_agrees {
        checks.push(check("rich lines match the brute-force oracle", ok, format!("{} lines", lines.len())));
    }

    let flats = if n <= FLAT_LIMIT && d >= 2 { Some(flat_counts(v)?) } else { None };
    let bounds = bound_terms(n, r, d, flats.as_ref().unwrap_or(&BTreeMap::new()))?;
    let ratios = bounds.ratios(lines.len());

    let progressions = if cfg.pipelines.contains(&PipelineKind::Progressions) {
        let (count, _) = count_aps(v, r)?;
        if n <= ORACLE_LIMIT {
            let brute = oracle::count_aps_bruteforce(v, r);
            checks.push(check("progression count matches enumeration", brute == count, format!("{count}")));
        }
        Some(count)
    } else {
        None
    };

    let design = if cfg.pipelines.contains(&PipelineKind::Design) && r >= 2 {
        let asm = assemble(v, &lines, r)?;
        let rep = verify_design(&asm.design);
        let rb = rank_bound_check(&asm.design, Some(&asm.veronese));
        let mut cover_ok = asm.design.cover.max_pair_multiplicity() <= 2;
        let degrees = line_degrees(n, &lines);
        let mult = asm.design.cover.point_multiplicity(n);
        cover_ok &= degrees.iter().zip(&mult).all(|(dl, m)| m >= dl);
        checks.push(check("tuple cover covers points and pairs at most twice", cover_ok, ""));
        checks.push(check(
            "design parameters within (r, k, 2)",
            rep.violations.is_empty() && rep.measured.q <= r && rep.measured.t <= 2,
            format!("{:?}", rep.measured),
        ));
        checks.push(check("rank bounds", rb.all_hold(), format!("rank {}", rb.rank)));
        Some(DesignSummary {
            tuples: asm.design.rows,
            q: rep.measured.q,
            k: rep.measured.k,
            t: rep.measured.t,
            rank: rb.rank,
            rank_veronese: rb.rank_veronese,
            bounds_hold: rb.all_hold(),
        })
    } else {
        None
    };

    let vanishing_degree = if cfg.pipelines.contains(&PipelineKind::Vanishing) && r >= 3 {
        let f = find_vanishing_poly(v, (r - 2) as u32)?;
        if let Some(f) = &f {
            checks.push(check("polynomial vanishes on every point", f.vanishes_on(v), ""));
        }
        f.and_then(|f| f.degree())
    } else {
        None
    };

    let hyperplane = if cfg.pipelines.contains(&PipelineKind::Hyperplane) && !lines.is_empty() {
        let mut constants = Constants::new(d);
        if let Some(c) = &cfg.theorem_constant {
            constants = constants.override_theorem(c.clone());
        }
        let ex = extract_hyperplane(v, r, &constants)?;
        if let Some(h) = &ex.hyperplane {
            checks.push(check("hyperplane subset matches membership", h.members(v) == ex.subset, ""));
        }
        if let Some(holds) = ex.trace.lower_bound_holds {
            checks.push(check("subset size at least (r0 - 1) k0", holds, ""));
        }
        Some(ex.trace)
    } else {
        None
    };

    if cfg.pipelines.contains(&PipelineKind::Sumproduct) {
        if let GeneratorSpec::Sumproduct { a, q, d } = spec {
            checks.push(sumproduct_check(a, q, *d)?);
        }
    }

    Ok(Row {
        config: spec.label(),
        n,
        d,
        r,
        lines: lines.len(),
        incidences: graph.len(),
        max_on_line,
        flats,
        oracle_agrees,
        progressions,
        design,
        vanishing_degree,
        hyperplane,
        bounds,
        ratios,
        checks,
    })
}

/// Structure of the sum-product configuration: `N^{2d-2}` lines, each
/// `|Q|`-rich, each meeting `V_0` exactly once.
pub fn sumproduct_check(a: &[Scalar], q: &[Scalar], d: usize) -> Result<Check> {
    let sp = sumproduct_config(a, q, d)?;
    let n_a = sp.v0.len();
    let expected = n_a * n_a;
    let v0: std::collections::HashSet<usize> = sp.v0.iter().copied().collect();
    let q_len = q.iter().collect::<std::collections::BTreeSet<_>>().len();
    let rich = sp.lines.iter().all(|l| l.len() == q_len && l.incident().iter().all(|&p| l.contains(sp.points.point(p))));
    let once = sp.lines.iter().all(|l| l.incident().iter().filter(|p| v0.contains(p)).count() == 1);
    Ok(check(
        "sum-product lines",
        sp.lines.len() == expected && rich && once,
        format!("{} lines, expected {expected}", sp.lines.len()),
    ))
}

fn run_dilation(spec: &DilationSpec) -> Result<DilationReport> {
    let a: Vec<Scalar> = spec.a.iter().cloned().collect::<std::collections::BTreeSet<_>>().into_iter().collect();
    let n_a = a.len();
    let limit = BigRational::from_integer((n_a * n_a).into()) / &spec.c;
    let dilations: Vec<Scalar> = spec
        .candidates
        .iter()
        .filter(|t| BigRational::from_integer(sum_dilate(&a, t).len().into()) <= limit)
        .cloned()
        .collect::<std::collections::BTreeSet<_>>()
        .into_iter()
        .collect();
    let r = dilations.len();
    let mut points = Vec::new();
    for t in &dilations {
        for s in sum_dilate(&a, t) {
            points.push(vec![t.clone(), s]);
        }
    }
    let p = PointSet::new(2, points)?;
    let mut checks = Vec::new();
    // every line (z, a + z a') meets P in exactly r points
    let index = p.index_map();
    let all_rich = a.iter().all(|x| {
        a.iter().all(|y| {
            dilations
                .iter()
                .all(|t| index.contains_key([t.clone(), x + &(t * y)].as_slice()))
        })
    });
    checks.push(check("every constructed line is |T|-rich", all_rich, format!("r = {r}")));
    let (rich, bounds) = if r >= 2 {
        let lines = rich_lines(&p, r)?;
        checks.push(check(
            "rich lines include the constructed family",
            lines.len() >= n_a * n_a,
            format!("{} rich lines", lines.len()),
        ));
        (Some(lines.len()), Some(bound_terms(p.len(), r, 2, &BTreeMap::new())?))
    } else {
        (None, None)
    };
    Ok(DilationReport {
        dilations,
        points: p.len(),
        lines: n_a * n_a,
        r,
        rich_lines: rich,
        bounds,
        checks,
    })
}

/// Runs every `(configuration, r)` pair (in parallel), then assembles the
/// report in configuration order.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Report> {
    let sets: Vec<(GeneratorSpec, PointSet)> = cfg
        .configs
        .iter()
        .map(|s| Ok((s.clone(), s.build()?)))
        .collect::<Result<_>>()?;
    let jobs: Vec<(usize, usize)> = (0..sets.len())
        .flat_map(|i| cfg.r_values.iter().map(move |&r| (i, r)))
        .collect();
    let rows: Vec<Row> = jobs
        .par_iter()
        .map(|&(i, r)| run_row(cfg, &sets[i].0, &sets[i].1, r))
        .collect::<Result<_>>()?;

    let mut slopes = Vec::new();
    for &r in &cfg.r_values {
        let samples: Vec<(usize, usize)> = rows.iter().filter(|x| x.r == r).map(|x| (x.n, x.lines)).collect();
        let slope = loglog_slope(&samples).map(|s| sig_digits(s, 12));
        slopes.push(Slope { r, samples, slope });
    }
    let dilation = cfg.dilation.as_ref().map(run_dilation).transpose()?;
    let mut report = Report {
        id: cfg.id.clone(),
        seed: cfg.seed,
        version: env!("CARGO_PKG_VERSION").to_string(),
        config: cfg.clone(),
        rows,
        slopes,
        dilation,
        passed: true,
    };
    let passed = report.checks().all(|c| c.passed);
    report.passed = passed;
    Ok(report)
}

/// CSV rendering: one line per row, decimals with 12 significant digits.
pub fn report_csv(report: &Report) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header: Vec<String> = ["config", "n", "d", "r", "lines", "incidences", "max_on_line", "oracle", "progressions"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    for b in BOUND_NAMES {
        header.push(format!("bound_{b}"));
        header.push(format!("ratio_{b}"));
    }
    header.push("checks_passed".into());
    w.write_record(&header).map_err(csv_err)?;
    for row in &report.rows {
        let mut rec = vec![
            row.config.clone(),
            row.n.to_string(),
            row.d.to_string(),
            row.r.to_string(),
            row.lines.to_string(),
            row.incidences.to_string(),
            row.max_on_line.to_string(),
            row.oracle_agrees.map(|b| b.to_string()).unwrap_or_default(),
            row.progressions.map(|c| c.to_string()).unwrap_or_default(),
        ];
        for b in BOUND_NAMES {
            rec.push(row.bounds.bound(b).map(|x| decimal(x, 12)).unwrap_or_default());
            let ratio = row.ratios.iter().find(|t| t.name == b);
            rec.push(ratio.map(|t| decimal(&t.value, 12)).unwrap_or_default());
        }
        rec.push(row.checks.iter().all(|c| c.passed).to_string());
        w.write_record(&rec).map_err(csv_err)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Invariant(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Invariant(e.to_string()))
}

fn csv_err(e: csv::Error) -> Error {
    Error::Invariant(format!("csv: {e}"))
}
