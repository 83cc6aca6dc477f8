//! Exact-arithmetic machinery for rich lines in high-dimensional point sets:
//! rich-line enumeration, Veronese embeddings, design-matrix rank
//! certificates, incidence-graph refinement and the vanishing-polynomial and
//! flat-point pipelines built on top of them.
//!
//! All arithmetic is exact over `ℚ` or `ℚ[i]` (see [`scalar::Scalar`]).

pub mod config;
pub mod design;
pub mod error;
pub mod harness;
pub mod incidence;
pub mod io;
pub mod linalg;
pub mod refine;
pub mod scalar;
pub mod vanishing;
pub mod veronese;

pub use config::PointSet;
pub use error::{Error, Result};
pub use incidence::{Hyperplane, Line};
pub use linalg::ExactMatrix;
pub use scalar::Scalar;
pub use veronese::Polynomial;
