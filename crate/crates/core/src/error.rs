use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("degenerate page: genus {genus}, {boundary} boundary component(s) has no arc system")]
    DegeneratePage { genus: usize, boundary: usize },
    #[error("curve is not embedded or is null-homotopic: {0}")]
    NonEmbeddedCurve(String),
    #[error("invalid path: {0}")]
    InvalidPath(String),
    #[error("admissibility not reached within {0} winding attempts")]
    WindingBudgetExceeded(usize),
    #[error("diagram not made nice within {0} finger moves")]
    NiceificationBudgetExceeded(usize),
    #[error("diagram is not nice")]
    NotNice,
    #[error("diagram is not weakly admissible")]
    NotAdmissible,
    #[error("chain is not a cycle")]
    NotACycle,
    #[error("domain search exceeded the coefficient cap {0}")]
    CapExceeded(i64),
    #[error("naturality check failed: {0}")]
    NaturalityCheckFailed(String),
    #[error("syntax error at {line}:{col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("unknown curve `{0}`")]
    UnknownCurve(String),
    #[error("unknown word `{0}`")]
    UnknownWord(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}
