use crate::multiindex::MultiIndex;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("multi-index entries must be >= 1, got {0:?}")]
    InvalidMultiIndex(Vec<u32>),

    #[error("set is not downward-closed: backward neighbor of {0} is missing")]
    NotDownwardClosed(MultiIndex),

    #[error("{0} is not in the margin of the index set")]
    NotInMargin(MultiIndex),

    #[error("margin is empty")]
    EmptyMargin,

    #[error("unsupported Clenshaw-Curtis node count {0}")]
    UnsupportedNodeCount(usize),

    #[error("missing value: {0}")]
    MissingValue(String),

    #[error("point {0:?} is not a collocation point of the grid")]
    NotAGridPoint(Vec<f64>),

    #[error("mesh has no triangles")]
    EmptyMesh,

    #[error("invalid {kind} id {id}")]
    InvalidId { kind: &'static str, id: usize },

    #[error("point ({0}, {1}) lies outside the domain")]
    PointOutsideDomain(f64, f64),

    #[error("linear solver failed: {0}")]
    Solver(String),

    #[error("diffusion coefficient not elliptic: minimum {min} at parameter corner {corner:?}")]
    EllipticityViolated { min: f64, corner: Vec<f64> },

    #[error("solution does not match its mesh: {0}")]
    MismatchedSolution(String),

    #[error("all marking weights are zero")]
    AllZeroWeights,

    #[error("finite element refinement did not reach tolerance within {0} sweeps")]
    SweepCapExceeded(usize),

    #[error("missing estimator value for {0}")]
    MissingZeta(MultiIndex),

    #[error("index set after step {step} is not the rectangle spanned by {expected}")]
    RectangleViolation { step: usize, expected: MultiIndex },

    #[error("invalid problem: {0}")]
    InvalidProblem(String),

    #[error("config error: {0}")]
    Config(String),

    #[error("history error: {0}")]
    History(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
