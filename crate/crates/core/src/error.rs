use thiserror::Error;

use crate::geodesics::GeodesicState;

pub type Result<T> = std::result::Result<T, GeomError>;

#[derive(Debug, Error)]
pub enum GeomError {
    #[error("{0}")]
    InvalidParameter(String),

    /// r'^2 + z'^2 vanishes, so the meridian has no tangent at `w`.
    #[error("degenerate profile: r'^2 + z'^2 = 0 at w = {w}")]
    DegenerateProfile { w: f64 },

    #[error("profile radius must be positive in the interior, r({w}) = {r}")]
    NonPositiveRadius { w: f64, r: f64 },

    #[error("singularity at w = {w}: {what}")]
    Singular { w: f64, what: &'static str },

    #[error("q = {q} is not admissible: 1 + q b(w) vanishes at w = {w}; positive-definite range is ({lo}, inf){minkowski}")]
    InadmissibleQ {
        q: f64,
        w: f64,
        lo: f64,
        minkowski: String,
    },

    #[error("{0}")]
    Domain(String),

    #[error("bad CSV header {found:?}, expected \"w,r,z\"")]
    BadHeader { found: String },

    #[error("no data rows")]
    NoData,

    #[error("need at least 4 data rows, got {0}")]
    TooFewRows(usize),

    #[error("malformed row {row}: {msg}")]
    MalformedRow { row: usize, msg: String },

    #[error("w is not strictly increasing at row {row}")]
    NonMonotone { row: usize },

    #[error("negative radius at interior row {row}")]
    NegativeRadius { row: usize },

    #[error("step size underflow at t = {t}")]
    StepUnderflow { t: f64, last: GeodesicState },

    #[error("traces do not overlap")]
    DisjointTraces,

    #[error("internal error: {0}")]
    Internal(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}
