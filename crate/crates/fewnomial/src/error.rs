use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("term {term} overflowed during evaluation")]
    Overflow { term: usize },
    #[error("schema error at {location}: {message}")]
    Schema { location: String, message: String },
    #[error("validation error: {0}")]
    Validation(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("singular monomial map: {0}")]
    SingularMap(String),
    #[error("not applicable: {0}")]
    NotApplicable(String),
    #[error("empty polytope")]
    EmptyPolytope,
    #[error("zero set contains a continuum: {0}")]
    Continuum(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("point is within tolerance of the polytope boundary")]
    NearBoundary,
    #[error("degree growth exceeded the cap ({0})")]
    DegreeCap(usize),
}
