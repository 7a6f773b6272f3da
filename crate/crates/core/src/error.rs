use thiserror::Error;

/// Errors raised by the numerical laboratory.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("field is not normalized: |‖u‖² − 1| = {deviation:.3e}")]
    NotNormalized { deviation: f64 },

    #[error("fields live on different grids")]
    GridMismatch,

    #[error("shooting bracket [{lo}, {hi}] does not straddle the ground state: {detail}")]
    Bracket { lo: f64, hi: f64, detail: String },

    #[error(
        "support overflow: mass {mass:.3e} in the outer annulus exceeds {limit:.1e}; \
         try an extent of at least {suggested_extent:.3}"
    )]
    SupportOverflow {
        mass: f64,
        limit: f64,
        suggested_extent: f64,
    },

    #[error("numerical breakdown: {0}")]
    Numerical(String),

    #[error("need ≥ 4 rungs, got {0}")]
    TooFewRungs(usize),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
