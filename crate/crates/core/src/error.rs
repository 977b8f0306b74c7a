//! Error type shared by all modules.

use thiserror::Error;

/// Everything that can go wrong in a desk-scale computation.
///
/// Mathematical contract violations get their own variants so callers can
/// distinguish "you asked a malformed question" from "an internal invariant
/// broke", which is always a bug.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("characteristic {0} is not prime")]
    CompositeCharacteristic(u64),
    #[error("bad extension: {0}")]
    BadExtension(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("index out of range: {0}")]
    IndexOutOfRange(String),
    #[error("objects belong to different field contexts")]
    ContextMismatch,
    #[error("point does not lie on the hypersurface")]
    PointNotOnHypersurface,
    #[error("point does not lie on the subspace")]
    PointNotOnLine,
    #[error("inclusion violated: {0}")]
    InclusionViolated(String),
    #[error("map is identically zero")]
    ZeroMap,
    #[error("map is not surjective as a map of sheaves")]
    NotSurjective,
    #[error("twist too negative: {0}")]
    TwistTooNegative(String),
    #[error("line does not lie on the hypersurface")]
    LineNotOnHypersurface,
    #[error("hypersurface is singular along the subspace")]
    SingularAlongLine,
    #[error("plane does not lie on the hypersurface")]
    PlaneNotOnHypersurface,
    #[error("pipelines disagree: {0}")]
    PipelineDisagreement(String),
    #[error("degenerate input: {0}")]
    DegenerateInput(String),
    #[error("degree mismatch: {0}")]
    DegreeMismatch(String),
    #[error("system is not base-point free")]
    NotBasepointFree,
    #[error("components do not define a morphism from P^1")]
    NotAMorphism,
    #[error("characteristic divides the degree")]
    CharacteristicDividesDegree,
    #[error("ambient dimension too small: {0}")]
    DimensionTooSmall(String),
    #[error("no d-th root of -1 in this field")]
    NoRootOfMinusOne,
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("sampling budget exhausted: {0}")]
    BudgetExhausted(String),
    #[error("parse error: {0}")]
    ParseError(String),
    #[error("validation error: {0}")]
    ValidationError(String),
    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),
}
