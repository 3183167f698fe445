use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("non-finite coordinate in {0}")]
    NonFinite(&'static str),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("half-space normal must be nonzero")]
    ZeroNormal,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("vertex enumeration supports d in 2..=4, got {0}")]
    UnsupportedDimension(usize),
    #[error("polytope is unbounded")]
    Unbounded,
    #[error("polytope is empty")]
    EmptyPolytope,
    #[error("linear solver degenerated: {0}")]
    SolverDegenerate(String),
    #[error("polygon criterion requires an even number of sides, got {0}")]
    OddPolygon(usize),
    #[error("point ({x}, {y}) lies outside the unbiased polygon")]
    OutsideUnbiasedPolygon { x: f64, y: f64 },
    #[error("not an effect of theory `{0}`")]
    NotAnEffect(String),
    #[error("theory `{0}` has no reflecting hyperplane")]
    NoReflectingHyperplane(String),
    #[error("nontrivial extremal effects are affinely degenerate (rank {rank} < {needed})")]
    DegenerateHyperplane { rank: usize, needed: usize },
    #[error("theory `{0}` is specified by its effect space only; states are unavailable")]
    StatesUnavailable(String),
    #[error("effect is not a nontrivial extremal effect")]
    NotNontrivialExtremal,
    #[error("inconsistent theory: {0}")]
    InconsistentTheory(String),
    #[error("theory document: {0}")]
    Document(String),
}
