use thiserror::Error;

use crate::expr::{ChartError, EvalError, ParseError};

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("expression domain error: {0}")]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Chart(#[from] ChartError),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("dimension {dim} is not supported here (need {min}..={max})")]
    UnsupportedDimension { dim: usize, min: usize, max: usize },
    #[error("tensor shape mismatch: rank {0}/dim {1} vs rank {2}/dim {3}")]
    ShapeMismatch(usize, usize, usize, usize),
    #[error("slot {slot} out of range for rank {rank}")]
    SlotOutOfRange { slot: usize, rank: usize },
    #[error("cannot contract slot {0} with itself")]
    SameSlot(usize),
    #[error("declared symmetry ({0}, {1}) violated")]
    SymmetryViolation(usize, usize),
    #[error("non-finite tensor entry")]
    NonFinite,
    #[error("degenerate metric (determinant {det:e})")]
    DegenerateMetric { det: f64 },
    #[error("metric has definite signature ({positive}, {negative}); the light cone is empty")]
    DefiniteSignature { positive: usize, negative: usize },
    #[error("specification is not symmetric at component {0:?}")]
    NotSymmetric(Vec<usize>),
    #[error("specs live on charts of different dimension ({0} vs {1})")]
    ChartMismatch(usize, usize),
    #[error("zero vector")]
    ZeroVector,
    #[error("incompatible at point #{index} {point:?}: decomposition residual {residual:e}")]
    Incompatible {
        index: usize,
        point: Vec<f64>,
        residual: f64,
    },
    #[error("integration failed at step {step}: {source}")]
    Integration {
        step: usize,
        #[source]
        source: Box<Error>,
    },
    #[error("trace too short: {0} samples, need at least 3")]
    TraceTooShort(usize),
    #[error("zero velocity at trace sample {0}")]
    ZeroVelocity(usize),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
