use thiserror::Error;

/// Errors raised by geometry, operator and harness routines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("empty input")]
    EmptyInput,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("halfspace normal is zero")]
    ZeroNormal,
    #[error("direction is zero")]
    ZeroDirection,
    #[error("body has intrinsic dimension {found}, need at least {needed}")]
    TooLowDimensional { needed: usize, found: usize },
    #[error("body has zero volume")]
    ZeroVolume,
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("invalid valuation spec: {0}")]
    InvalidSpec(String),
    #[error("lambda must lie strictly between 0 and 1, got {0}")]
    InvalidLambda(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("directions do not positively span the space")]
    DegenerateDirections,
    #[error("recovered coefficients do not reproduce the operator: {0}")]
    NotAValuationWitness(String),
    #[error("matrix does not map the body onto itself")]
    NotASymmetry,
    #[error("parse error at {locus}: {msg}")]
    Parse { locus: String, msg: String },
    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn parse(locus: impl Into<String>, msg: impl Into<String>) -> Self {
        Error::Parse {
            locus: locus.into(),
            msg: msg.into(),
        }
    }
}

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}
