//! Vanishing polynomials, flat points and the hyperplane pipelines.

mod flat;
mod pipeline;
mod poly;
mod product;

pub use flat::{classify_flat_points, lines_in_zero_set, PointClass, PointKind};
pub use pipeline::{extract_hyperplane, extract_hyperplane_with_lines, Extraction, PipelineTrace};
pub use poly::{
    find_vanishing_poly, lemma_findpoly, lemma_findpoly_with_lines, vanishes_on_line, vanishing_dimension,
    Certificate, Constants, LemmaMode, LemmaResult,
};
pub use product::{ap_hyperplane, hyperplane_from_product, ProductSlice, ProgressionOutcome, ProgressionTrace};
