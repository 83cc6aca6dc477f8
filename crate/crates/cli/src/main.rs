use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use richlines::config::{grid, pasted_grids, power, random_points, sumproduct_config};
use richlines::harness::{report_csv, run_experiment, run_suite, ExperimentConfig, Suite};
use richlines::incidence::{count_aps, rich_lines};
use richlines::io::{read_json, read_points, to_json};
use richlines::scalar::{FieldKind, Scalar};
use richlines::vanishing::{extract_hyperplane, find_vanishing_poly, lemma_findpoly, Constants, LemmaMode};
use richlines::{Error, PointSet};
use serde_json::json;

#[derive(Parser)]
#[command(name = "richlines", version, about = "Exact rich-line experiments on point sets")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Grid,
    Pasted,
    Power,
    Sumproduct,
    Random,
}

#[derive(Clone, Copy, ValueEnum)]
enum VanishMode {
    /// Design-matrix certificate plus a vanishing polynomial of degree at most r-2.
    #[value(name = "lemma31", alias = "design")]
    Design,
    /// Lowest-degree vanishing polynomial only.
    Minimal,
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    Claims,
    Bounds,
    All,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a point set.
    Gen {
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long, default_value_t = 2)]
        d: usize,
        #[arg(long)]
        h: Option<usize>,
        /// Dimension of each pasted copy.
        #[arg(long)]
        l: Option<usize>,
        #[arg(long)]
        copies: Option<usize>,
        /// Base set for `power`.
        #[arg(long)]
        base: Option<PathBuf>,
        /// Comma-separated values of A for `sumproduct`.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        a: Vec<Scalar>,
        /// Comma-separated values of Q for `sumproduct`.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        q: Vec<Scalar>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, default_value_t = 10)]
        range: i64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// List the r-rich lines of a point set.
    Richlines {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Count r-term arithmetic progressions.
    Apcount {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        r: usize,
        /// Write the progressions as JSON.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Find a polynomial vanishing on a point set.
    Vanish {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        r: usize,
        #[arg(long, value_enum, default_value = "lemma31")]
        mode: VanishMode,
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Extract a hyperplane holding many points.
    Hyperplane {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        r: usize,
        /// Theorem constant override, as `p/q`.
        #[arg(long)]
        constant: Option<Scalar>,
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Run a seeded property suite.
    Verify {
        #[arg(long, value_enum, default_value = "all")]
        suite: SuiteArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run an experiment sweep from a JSON config.
    Sweep {
        #[arg(long)]
        config: PathBuf,
    },
}

/// Outcome of a subcommand that ran to completion.
enum Status {
    Pass,
    Violation,
}

fn emit(out: Option<&Path>, text: &str) -> anyhow::Result<()> {
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn need<T>(value: Option<T>, flag: &str, kind: &str) -> anyhow::Result<T> {
    value.with_context(|| format!("--{flag} is required for --kind {kind}"))
}

fn generate(cmd: &Command) -> anyhow::Result<PointSet> {
    let Command::Gen {
        kind,
        d,
        h,
        l,
        copies,
        base,
        a,
        q,
        n,
        range,
        seed,
        ..
    } = cmd
    else {
        unreachable!()
    };
    let set = match kind {
        Kind::Grid => grid(*d, need(*h, "h", "grid")?)?,
        Kind::Pasted => pasted_grids(
            *d,
            need(*l, "l", "pasted")?,
            need(*copies, "copies", "pasted")?,
            need(*h, "h", "pasted")?,
        )?,
        Kind::Power => {
            let base = read_points(need(base.as_deref(), "base", "power")?)?;
            power(&base, need(*l, "l", "power")?)?
        }
        Kind::Sumproduct => {
            if a.is_empty() || q.is_empty() {
                bail!("--a and --q are required for --kind sumproduct");
            }
            sumproduct_config(a, q, *d)?.points
        }
        Kind::Random => random_points(*d, need(*n, "n", "random")?, *range, *seed)?,
    };
    Ok(set)
}

fn run(cli: Cli) -> anyhow::Result<Status> {
    match &cli.command {
        cmd @ Command::Gen { out, .. } => {
            let set = generate(cmd)?;
            emit(out.as_deref(), &to_json(&set)?)?;
            if out.is_some() {
                eprintln!("{} points in dimension {}", set.len(), set.dim());
            }
            Ok(Status::Pass)
        }
        Command::Richlines { input, r, out } => {
            let v = read_points(input)?;
            let lines = rich_lines(&v, *r)?;
            emit(out.as_deref(), &to_json(&lines)?)?;
            if out.is_some() {
                println!("{} lines with at least {r} points", lines.len());
            }
            Ok(Status::Pass)
        }
        Command::Apcount { input, r, out } => {
            let v = read_points(input)?;
            let (count, aps) = count_aps(&v, *r)?;
            println!("{count}");
            if let Some(p) = out {
                emit(Some(p), &to_json(&aps)?)?;
            }
            Ok(Status::Pass)
        }
        Command::Vanish { input, r, mode, trace } => {
            let v = read_points(input)?;
            let (poly, record) = match mode {
                VanishMode::Design => {
                    let res = lemma_findpoly(&v, *r, LemmaMode::Plain)?;
                    for w in &res.warnings {
                        eprintln!("warning: {w}");
                    }
                    (res.polynomial.clone(), serde_json::to_value(&res)?)
                }
                VanishMode::Minimal => {
                    let max = u32::try_from(r.saturating_sub(2).max(1)).context("r too large")?;
                    let f = find_vanishing_poly(&v, max)?;
                    (f.clone(), json!({ "max_degree": max, "polynomial": f }))
                }
            };
            if let Some(p) = trace {
                emit(Some(p), &to_json(&record)?)?;
            }
            match poly {
                Some(f) => {
                    println!("{}", serde_json::to_string(&f)?);
                    if !f.vanishes_on(&v) {
                        eprintln!("violation: polynomial does not vanish on the input");
                        return Ok(Status::Violation);
                    }
                }
                None => println!("null"),
            }
            Ok(Status::Pass)
        }
        Command::Hyperplane {
            input,
            r,
            constant,
            trace,
        } => {
            let v = read_points(input)?;
            let mut constants = Constants::new(v.dim());
            if let Some(c) = constant {
                if c.kind() != FieldKind::Rational {
                    bail!("--constant must be rational");
                }
                constants = constants.override_theorem(c.re().clone());
            }
            let ex = extract_hyperplane(&v, *r, &constants)?;
            for w in &ex.trace.warnings {
                eprintln!("warning: {w}");
            }
            if let Some(p) = trace {
                emit(Some(p), &to_json(&ex.trace)?)?;
            }
            let summary = json!({
                "hyperplane": ex.hyperplane,
                "points": ex.subset,
                "lower_bound": ex.trace.lower_bound.to_string(),
                "lower_bound_holds": ex.trace.lower_bound_holds,
            });
            print!("{}", to_json(&summary)?);
            if ex.trace.lower_bound_holds == Some(false) {
                eprintln!("violation: hyperplane holds fewer points than the lower bound");
                return Ok(Status::Violation);
            }
            Ok(Status::Pass)
        }
        Command::Verify { suite, seed, out } => {
            let suite = match suite {
                SuiteArg::Claims => Suite::Claims,
                SuiteArg::Bounds => Suite::Bounds,
                SuiteArg::All => Suite::All,
            };
            let report = run_suite(suite, *seed)?;
            for c in &report.checks {
                let tag = if c.passed { "PASS" } else { "FAIL" };
                println!("{tag} {}: {}", c.name, c.detail);
            }
            if let Some(p) = out {
                emit(Some(p), &to_json(&report)?)?;
            }
            Ok(if report.passed() { Status::Pass } else { Status::Violation })
        }
        Command::Sweep { config } => {
            let cfg: ExperimentConfig = read_json(config)?;
            let report = run_experiment(&cfg)?;
            let json = to_json(&report)?;
            match &cfg.out_json {
                Some(p) => emit(Some(p), &json)?,
                None => print!("{json}"),
            }
            if let Some(p) = &cfg.out_csv {
                emit(Some(p), &report_csv(&report)?)?;
            }
            for c in report.checks().filter(|c| !c.passed) {
                eprintln!("FAIL {}: {}", c.name, c.detail);
            }
            Ok(if report.passed { Status::Pass } else { Status::Violation })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(Status::Pass) => ExitCode::SUCCESS,
        Ok(Status::Violation) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            let violation = matches!(e.downcast_ref::<Error>(), Some(Error::Invariant(_)));
            ExitCode::from(if violation { 1 } else { 2 })
        }
    }
}
