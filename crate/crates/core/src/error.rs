use alloc::string::String;

/// Errors raised by model construction and simulation entry points.
///
/// Encoding-constraint violations are not errors: they are carried in
/// [`crate::interactions::EncodingReport`].
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("unknown graph `{0}`")]
    UnknownGraph(String),
    #[error("graph {graph} has no {optimizer} embedding")]
    MissingEmbedding { graph: char, optimizer: &'static str },
    #[error("vertex {vertex} out of range for graph with {n} vertices")]
    InvalidVertex { vertex: usize, n: usize },
    #[error("distance of vertex {0} to itself requested")]
    SameVertex(usize),
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("invalid level scheme: {0}")]
    InvalidLevels(String),
    #[error("invalid drive plan: {0}")]
    InvalidPlan(String),
    #[error("distance must be positive, got {0}")]
    NonPositiveDistance(f64),
    #[error("effective Rabi frequency must be positive, got {0}")]
    NonPositiveFrequency(f64),
    #[error("digit {digit} out of range for {levels} local levels")]
    DigitOutOfRange { digit: usize, levels: usize },
    #[error("basis index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("Hilbert space dimension {dim} exceeds limit {limit}")]
    DimensionTooLarge { dim: usize, limit: usize },
    #[error("time {t} outside schedule range [0, {total}]")]
    TimeOutOfRange { t: f64, total: f64 },
    #[error("{n} vertices exceeds enumeration bound {limit}")]
    TooManyVertices { n: usize, limit: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("unknown preset `{0}`")]
    UnknownPreset(String),
    #[error("threshold {0} outside [0, 1)")]
    InvalidThreshold(f64),
}

pub type Result<T> = core::result::Result<T, Error>;
