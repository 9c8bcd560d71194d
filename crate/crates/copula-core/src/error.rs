#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("breakpoints must be strictly increasing")]
    NonMonotone,
    #[error("breakpoints must run from 0 to 1 with at least two points per axis")]
    BadEndpoints,
    #[error("index outside the mesh")]
    IndexOutOfRange,
    #[error("rectangle must have i1 < i2 and j1 < j2")]
    DegenerateRect,
    #[error("operands live on different meshes")]
    MeshMismatch,
    #[error("mesh is not symmetric under the requested reflection")]
    AsymmetricMesh,
    #[error("point outside the unit square")]
    OutOfDomain,
    #[error("lower function exceeds upper function somewhere")]
    OrderViolated,
    #[error("function is not grounded with neutral margins")]
    NotGroundedNeutral,
    #[error("pair is not an imprecise copula")]
    NotImprecisePair,
    #[error("the interval [A,B] contains no copula")]
    EmptyInterval,
    #[error("required pointwise condition fails at the requested point")]
    ConditionFails,
    #[error("instance too large for exhaustive search")]
    TooLarge,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

impl From<ratlp::LpError> for Error {
    fn from(e: ratlp::LpError) -> Self {
        Error::Internal(format!("lp: {e}"))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
