use thiserror::Error;

/// Errors raised by the series, transform, PDE and summation routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("incompatible coefficient widths: {0} and {1}")]
    ShapeMismatch(usize, usize),
    #[error("invalid index: {0}")]
    InvalidIndex(String),
    #[error("invalid monomial order: {0}")]
    InvalidOrder(String),
    #[error("monomial order mismatch")]
    OrderMismatch,
    #[error("Gamma kernel has a pole at argument {0}")]
    GammaPole(String),
    #[error("exact mode needs integer Gamma arguments, got {0}")]
    InexactGamma(String),
    #[error("term is not transformable: {0}")]
    NotTransformable(String),
    #[error("blow-up not admissible: {0}")]
    NotAdmissible(String),
    #[error("too few terms: {0}")]
    TooFewTerms(String),
    #[error("singular matrix: {0}")]
    Singular(String),
    #[error("singular direction: {0}")]
    SingularDirection(String),
    #[error("no convergence: {0}")]
    NonConvergence(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;
