use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed diagram: {0}")]
    MalformedDiagram(String),

    #[error("unknown component {0}")]
    UnknownComponent(u32),

    #[error("unknown curve label {0}")]
    UnknownCurve(String),

    #[error("rational framing {0} present; clear rational coefficients first")]
    RationalFraming(String),

    #[error("rule precondition violated: {0}")]
    Precondition(String),

    #[error("unsupported strand set: {0}")]
    UnsupportedStrandSet(String),

    #[error(
        "invariant check failed for rule {rule}: H1 before {before} != H1 after {after}; \
         application aborted"
    )]
    InvariantViolation {
        rule: String,
        before: String,
        after: String,
    },

    #[error("phase violation: {0}")]
    PhaseViolation(String),

    #[error("unknown locus {0}")]
    UnknownLocus(u32),

    #[error("invalid target: {0}")]
    InvalidTarget(String),

    #[error("zero coefficient where a nonzero rational is required")]
    ZeroCoefficient,

    #[error("serialization error: {0}")]
    Serialization(String),
}
