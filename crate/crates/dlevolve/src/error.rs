use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid knowledge base: {}", .0.join("; "))]
    Validation(Vec<String>),
    #[error("knowledge base is unsatisfiable")]
    UnsatisfiableKb,
    #[error("input is unsatisfiable: {0}")]
    UnsatisfiableInput(String),
    #[error("the union of the two ABoxes is unsatisfiable")]
    UnsatisfiableUnion,
    #[error("new information is incoherent")]
    IncoherentNewInfo,
    #[error("new information is incoherent with the TBox")]
    IncoherentWithTbox,
    #[error("new information contains non-ABox assertion {0}")]
    NonAboxNewInfo(String),
    #[error("contraction input contains tautology {0}")]
    Tautology(String),
    #[error("input is not closed: missing {0}")]
    InputNotClosed(String),
    #[error("subset is not coherent with the new information")]
    SubsetNotCoherentWithN,
    #[error("domain size {size} is smaller than the {needed} named constants")]
    DomainTooSmall { size: usize, needed: usize },
    #[error("search space too large: {0}")]
    SearchSpaceTooLarge(String),
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("instance too large: {0}")]
    TooLarge(String),
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
