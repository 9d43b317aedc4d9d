use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("malformed cycles: {0}")]
    MalformedCycles(String),
    #[error("cannot mix ray points and line points")]
    DomainMismatch,
    #[error("ambient mismatch: H_{left} vs H_{right}")]
    AmbientMismatch { left: usize, right: usize },
    #[error("generator g{k} does not exist in H_{n}")]
    GeneratorOutOfRange { n: usize, k: usize },
    #[error("invalid point: {0}")]
    InvalidPoint(String),
    #[error("element is not finitary (pi = {0})")]
    NotFinitary(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid element: {0}")]
    InvalidElement(String),
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("lattice has infinite index")]
    InfiniteIndex,
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("support of a generator leaves the window at {0}")]
    WindowViolation(String),
    #[error("enumeration exceeded the budget of {0} elements")]
    OracleOverflow(usize),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("not applicable: {0}")]
    NotApplicable(String),
    #[error("invalid descriptor: {0}")]
    InvalidDescriptor(String),
    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
