use thiserror::Error;

/// Errors surfaced by the library operations.
///
/// Most operations are total on values that satisfy their documented
/// preconditions; the variants here cover the conditions that are part of the
/// public contract rather than programming errors.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("generator index {index} out of range for rank {rank}")]
    GeneratorOutOfRange { index: usize, rank: usize },

    #[error("invalid generator identifier {0:?}")]
    BadIdentifier(String),

    #[error("duplicate generator identifier {0:?}")]
    DuplicateIdentifier(String),

    #[error("identifier {0:?} is reserved for a stable letter")]
    ReservedIdentifier(String),

    #[error("unknown token {0:?} in word")]
    UnknownToken(String),

    #[error("empty word not allowed here")]
    EmptyWord,

    #[error("edges {0} and {1} do not form a legal fold pair")]
    IllegalFold(usize, usize),

    #[error("word does not trace a closed loop at the basepoint")]
    NotAMember,

    #[error("endomorphism is not injective")]
    NonInjective,

    #[error("generator list is empty")]
    EmptyGenerators,

    #[error("generators reduce to the trivial subgroup")]
    TrivialSubgroup,

    #[error("certification depth must be at least 1")]
    ZeroDepth,

    #[error("generator was not recorded by the pipeline")]
    UnknownGenerator,

    #[error("internal invariant violated: {0}")]
    Internal(String),
}
