//! Experiment harness: bound evaluation, configured sweeps and property
//! suites.

pub mod bounds;
pub mod experiment;
pub mod suites;

pub use bounds::{bound_terms, flat_counts, loglog_slope, BoundTerms};
pub use experiment::{report_csv, run_experiment, ExperimentConfig, Report};
pub use suites::{random_polynomial, run_suite, Check, Suite, SuiteReport};
