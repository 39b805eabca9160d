use thiserror::Error;

pub type Result<T, E = PcohError> = std::result::Result<T, E>;

/// Every failure carries a distinct message prefix so that front ends can
/// classify it without matching on variants.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PcohError {
    #[error("web mismatch: {0}")]
    WebMismatch(String),
    #[error("degenerate coordinate: {0}")]
    DegenerateCoordinate(String),
    #[error("partiality: {0}")]
    Partiality(String),
    #[error("unbounded: {0}")]
    Unbounded(String),
    #[error("truncation: {0}")]
    Truncation(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("not parallel: {0}")]
    NotParallel(String),
    #[error("not in ball: {0}")]
    NotInBall(String),
    #[error("invalid morphism: {0}")]
    InvalidMorphism(String),
    #[error("not substochastic: {0}")]
    NotSubstochastic(String),
    #[error("size bound exceeded: {0}")]
    SizeBound(String),
    #[error("inexact object: {0}")]
    Inexact(String),
    #[error("malformed input: {0}")]
    Malformed(String),
}
