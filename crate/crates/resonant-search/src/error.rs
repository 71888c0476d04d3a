//! Error taxonomy shared by every module of the crate.

use thiserror::Error;

/// All failure modes surfaced by the library.
///
/// Validation failures carry enough context to name the violated constraint;
/// numerical failures carry the abort point and a remedy hint.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("dimension must be at least 2, got {0}")]
    DimensionTooSmall(usize),

    #[error("state norm is {norm:.17e}, expected 1 within {tol:.1e}")]
    NotNormalized { norm: f64, tol: f64 },

    #[error(
        "matrix is not Hermitian: entries ({i},{j}) and ({j},{i}) disagree by {delta:.3e} \
         (tolerance {tol:.1e})"
    )]
    NonHermitian { i: usize, j: usize, delta: f64, tol: f64 },

    #[error("target index {target} is out of range for dimension {n}")]
    TargetOutOfRange { target: usize, n: usize },

    #[error(
        "initial state coincides with the target basis state (overlap magnitude {overlap}); \
         the orthogonal complement is undefined and there is nothing to search"
    )]
    TargetIsInitial { overlap: f64 },

    #[error("invalid drive: {reason}")]
    InvalidDrive { reason: String },

    #[error(
        "dimension {n} exceeds the dense-matrix limit {limit}; use the effective two-level \
         model, which is exact for these Hamiltonians"
    )]
    DenseLimitExceeded { n: usize, limit: usize },

    #[error(
        "degenerate projection: leakage {leakage} leaves no weight in the two-level subspace"
    )]
    DegenerateProjection { leakage: f64 },

    #[error("integration aborted at t = {t}: {reason}; reduce the time step")]
    IntegrationAborted { t: f64, reason: String },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("scaling fit requires at least 4 usable points, got {points}")]
    FitTooFewPoints { points: usize },

    #[error("n values must span at least 3 octaves (max/min >= 8), got {min}..{max}")]
    FitSpanTooNarrow { min: usize, max: usize },

    #[error("cannot write {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
