use thiserror::Error;

/// Errors for state construction, spectral kernels, and metric evaluation.
#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("entry count {len} does not match shape {rows}x{cols}")]
    ShapeMismatch {
        rows: usize,
        cols: usize,
        len: usize,
    },

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("expected dimension {expected}, got {got}")]
    WrongDimension { expected: usize, got: usize },

    #[error("not Hermitian (max asymmetry {max_asymmetry:.3e})")]
    NotHermitian { max_asymmetry: f64 },

    #[error("not positive semidefinite (min eigenvalue {min_eigenvalue:.3e})")]
    NotPsd { min_eigenvalue: f64 },

    #[error("trace is not 1 (got {trace:.17e})")]
    TraceNotOne { trace: f64 },

    #[error("not traceless (|trace| = {trace_magnitude:.3e})")]
    NotTraceless { trace_magnitude: f64 },

    #[error("eigensolver did not converge after {sweeps} sweeps (off-diagonal mass {off:.3e})")]
    NoConvergence { sweeps: usize, off: f64 },

    #[error("invalid parameter for {family}: {constraint}")]
    InvalidParameter {
        family: &'static str,
        constraint: String,
    },

    #[error("tangent leaves the manifold stratum: {detail}")]
    StratumBoundary { detail: String },

    #[error("Kraus channel is not trace preserving (completeness deficit {deficit:.3e})")]
    ChannelIncomplete { deficit: f64 },

    #[error("unknown MC function '{0}'")]
    UnknownMcFunction(String),

    #[error("unknown relation id '{0}'")]
    UnknownRelation(String),

    #[error("unknown channel spec '{0}'")]
    UnknownChannel(String),

    #[error("bad state file: {0}")]
    BadStateFile(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
