use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("face lattice has {faces} faces, limit is {limit}")]
    FaceEnumerationTooLarge { faces: u128, limit: usize },
    #[error("{count} distinct projected faces exceed the enumeration limit {limit}")]
    EnumerationTooLarge { count: usize, limit: usize },
    #[error("isomorphism search exceeds {limit} candidates")]
    SearchTooLarge { limit: usize },
    #[error("invalid projected cone: {0}")]
    InvalidProjectedCone(String),
    #[error("candidate cone {0} is not a projected face")]
    NotAProjectedFace(usize),
    #[error("not a bunch: {0}")]
    ConditionViolated(String),
    #[error("bunch is not standard")]
    NotStandard,
    #[error("bunch is not free")]
    NotFree,
    #[error("projectable fan is not maximal")]
    NotMaximal,
    #[error("faces {0} and {1} admit no invariant separating form")]
    NotProjectable(usize, usize),
    #[error("invalid fan: {0}")]
    InvalidFan(String),
    #[error("rays do not span the lattice")]
    Degenerate,
    #[error("fan is not simplicial")]
    NotSimplicial,
    #[error("fan has a maximal cone that is not full-dimensional")]
    NotFullDimensional,
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("new multiplicities must not decrease")]
    MultiplicityDecrease,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
}

pub type Result<T> = std::result::Result<T, Error>;
