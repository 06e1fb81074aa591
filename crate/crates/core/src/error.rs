use thiserror::Error;

/// Domain errors raised by every module of the crate.
///
/// Each message names the invariant that was violated so that front ends can
/// report it verbatim.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("space mismatch: expected {expected}, found {found}")]
    SpaceMismatch { expected: String, found: String },

    #[error("invalid point for {space}: {reason}")]
    InvalidPoint { space: String, reason: String },

    #[error("invalid space: {0}")]
    InvalidSpace(String),

    #[error("coincident endpoints: minimizing geodesics need x != y")]
    CoincidentEndpoints,

    #[error("invalid geodesic branch {branch}: only {available} branch(es) available")]
    InvalidBranch { branch: usize, available: usize },

    #[error("invalid measure: {0}")]
    InvalidMeasure(String),

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("degenerate measure: weight {0} must lie strictly inside (0, 1)")]
    DegenerateMeasure(f64),

    #[error("out of regime: {0}")]
    OutOfRegime(String),

    #[error("transport solver failed: {0}")]
    Solver(String),

    #[error("no feasible bracket found for the Orlicz constraint: {0}")]
    BracketNotFound(String),

    #[error("invalid gauge: {0}")]
    InvalidGauge(String),

    #[error("invalid persistence diagram: {0}")]
    InvalidDiagram(String),

    #[error("invalid partial matching: {0}")]
    InvalidMatching(String),

    #[error("invalid embedding spec: {0}")]
    InvalidEmbedding(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("precondition failed: {0}")]
    Precondition(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_exponent(name: &'static str, p: f64, min: f64, strict: bool) -> Result<()> {
    let ok = p.is_finite() && if strict { p > min } else { p >= min };
    if ok {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name,
            reason: format!("must be {} {min}, got {p}", if strict { ">" } else { ">=" }),
        })
    }
}
