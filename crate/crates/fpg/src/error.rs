use thiserror::Error;

/// Errors produced by parsing and by algebraic operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("malformed exponent in `{0}`")]
    MalformedExponent(String),
    #[error("zero exponent in `{0}`")]
    ZeroExponent(String),
    #[error("invalid generator name `{0}`")]
    InvalidGeneratorName(String),
    #[error("duplicate generator `{0}`")]
    DuplicateGenerator(String),
    #[error("words belong to different alphabets")]
    AlphabetMismatch,
    #[error("relator reduces to the empty word")]
    EmptyRelator,
    #[error("presentation file: {0}")]
    PresentationFormat(String),
    #[error("subgroup generating set is empty")]
    EmptySubgroup,
    #[error("no word-problem solver for the target presentation")]
    NoWordProblemSolver,
    #[error("generator map is incomplete or over the wrong alphabets")]
    InvalidGeneratorMap,
    #[error("table is not over the expected presentation")]
    WrongPresentation,
    #[error("invalid coset table: {0}")]
    InvalidTable(String),
    #[error("low-index search exhausted its node budget")]
    IncompleteSearch,
}

pub type Result<T> = std::result::Result<T, Error>;
