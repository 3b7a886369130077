//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("ground set size {n} outside supported range 1..={max}")]
    GroundSetSize { n: usize, max: usize },

    #[error("element index {index} out of range for ground set of {n} elements")]
    ElementOutOfRange { index: usize, n: usize },

    #[error("subset uses elements outside the ground set of {n} elements")]
    SubsetOutOfRange { n: usize },

    #[error("invalid set function: {0}")]
    InvalidSetFunction(String),

    #[error("invalid matroid: {0}")]
    InvalidMatroid(String),

    #[error("invalid point: coordinate {index} = {value} not in [0,1]")]
    CoordinateOutOfRange { index: usize, value: f64 },

    #[error("point has {got} coordinates, ground set has {expected}")]
    DimensionMismatch { got: usize, expected: usize },

    #[error("closed-form evaluation is only available for hypergraph-cut oracles")]
    ClosedFormUnsupported,

    #[error("exact enumeration requires n <= {max}, got n = {n}")]
    ExactTooLarge { n: usize, max: usize },

    #[error("unsupported instance kind: {0}")]
    UnsupportedKind(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("no feasible exchange for element {element} in set {set_index}")]
    NoFeasibleExchange { element: usize, set_index: usize },

    #[error("convex combination member {set_index} is not independent")]
    DependentMember { set_index: usize },

    #[error("brute force limited to n <= {max} for this constraint, got n = {n}")]
    BruteForceTooLarge { n: usize, max: usize },

    #[error("tight-example trajectory check failed: {0}")]
    TightTrajectory(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("malformed instance file: {0}")]
    Malformed(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Malformed(e.to_string())
    }
}
