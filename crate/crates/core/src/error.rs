use thiserror::Error;

/// Errors raised by the index, iteration, jump and audit routines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("structural error: {0}")]
    Structural(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("degenerate endpoint (nullity {nullity}); use cz_lower / cz_upper instead")]
    DegenerateEndpoint { nullity: usize },
    #[error("insufficient sampling resolution: {0}")]
    Resolution(String),
    #[error("inconsistent Bott system: {0}")]
    Inference(String),
    #[error("ambiguous Bott data; unresolved jumps at {unresolved:?}")]
    Ambiguity { unresolved: Vec<String> },
    #[error("domain error: {0}")]
    Domain(String),
    #[error("not representable as an elliptic iteration formula: {0}")]
    NotRepresentable(String),
    #[error("bounded search exhausted after {tried} candidates (not a refutation)")]
    BoundedSearch { tried: u64 },
    #[error("local homology required for degenerate iterate {iterate} of {orbit}")]
    DataRequired { orbit: String, iterate: u64 },
    #[error("local homology of {orbit} has rank in degree {degree} outside [{lo}, {hi}]")]
    SupportViolation {
        orbit: String,
        degree: i64,
        lo: String,
        hi: String,
    },
    #[error("mean index of {orbit} is {value}; bound-based closure undecidable")]
    Undecidable { orbit: String, value: String },
    #[error("precision exhausted: {0}")]
    Precision(String),
    #[error("fixture construction failed: {0}")]
    Construction(String),
    #[error("unknown profile: {0}")]
    UnknownProfile(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
