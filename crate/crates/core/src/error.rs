use thiserror::Error;

/// Errors produced by the analysis and simulation routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{name} must lie in [0, 1], got {value}")]
    InvalidProbability { name: &'static str, value: f64 },

    #[error("uniform draw must lie in [0, 1), got {0}")]
    InvalidUniformDraw(f64),

    #[error("{name} is out of range: {value}")]
    InvalidParameter { name: &'static str, value: f64 },

    #[error("invalid channel spec: {0}")]
    InvalidSpec(String),

    #[error("distributions have different lengths: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("window [{start}, {end}) is empty or exceeds the {uses} recorded positions")]
    EmptyWindow { start: u64, end: u64, uses: u64 },

    #[error("no degrading map exists: delivered probability r = {r} exceeds 0.5")]
    NotAntidegradable { r: f64 },

    #[error("capacity solver did not converge within {iterations} iterations (gap {gap:.3e})")]
    NoConvergence { iterations: usize, gap: f64 },

    #[error("ensembles are not comparable: {0}")]
    MismatchedEnsembles(String),
}

pub type Result<T> = std::result::Result<T, Error>;
