use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },

    #[error("duplicate point at index {0}")]
    DuplicatePoint(usize),

    #[error("configuration of {requested} points exceeds the size cap of {cap}")]
    SizeCap { requested: u128, cap: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("identical points cannot define a line")]
    IdenticalPoints,

    #[error("points are not collinear")]
    NotCollinear,

    #[error("fewer than {needed} points on the line (found {found})")]
    TooFewPoints { needed: usize, found: usize },

    #[error("zero polynomial")]
    ZeroPolynomial,

    #[error("polynomial is not homogeneous")]
    NotHomogeneous,

    #[error("empty edge set")]
    EmptyGraph,

    #[error("degree {degree} of point {point} is below the threshold {threshold}")]
    DegreeBelowThreshold {
        point: usize,
        degree: usize,
        threshold: String,
    },

    #[error("no {0}-rich lines")]
    NoRichLines(usize),

    #[error("polynomial does not vanish on line {0}")]
    NotVanishingOnLine(usize),

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("hyperplane normal is zero")]
    ZeroNormal,

    #[error("hyperplane does not meet the product set")]
    DisjointHyperplane,

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
