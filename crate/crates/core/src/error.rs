use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("generator id {id} out of range for an oracle with {count} generators")]
    UnknownGenerator { id: usize, count: usize },
    #[error("word {0} lies outside the recognized sublanguage")]
    UnrecognizedWord(String),
    #[error("operands belong to different group oracles")]
    OracleMismatch,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("chain is not a cycle: {0}")]
    NotACycle(String),
    #[error("matrices are not mutually inverse")]
    NotInverse,
    #[error("{0} is not central")]
    NotCentral(String),
    #[error("cannot reduce term {0} to centralizer form")]
    IrreducibleTerm(String),
    #[error("supplied maps are not a chain contraction")]
    NotAContraction,
    #[error("levels carry different translation elements")]
    MixedEta,
    #[error("chain homotopy relation fails: {0}")]
    RelationFailure(String),
    #[error("rebasing matrix must be diagonal with entries +-g")]
    NotDiagonalUnit,
    #[error("a fixed point is present")]
    FixedPointPresent,
    #[error("operation needs closed Seifert data")]
    BoundedVariant,
    #[error("Seifert data is not admissible")]
    NotAdmissible,
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("cannot decide: {0}")]
    Undecidable(String),
    #[error("independent computations disagree: {0}")]
    Disagreement(String),
}

pub type Result<T> = std::result::Result<T, Error>;
