use thiserror::Error;

/// Maximum length in bytes of a state identifier.
pub const MAX_ID_LEN: usize = 64;
/// Maximum number of atomic propositions in one structure.
pub const MAX_ATOMS: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{line}:{column}: syntax error: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid identifier `{0}`")]
    InvalidIdentifier(String),
    #[error("identifier `{0}` exceeds {MAX_ID_LEN} bytes")]
    IdentifierTooLong(String),
    #[error("too many atomic propositions ({0}, limit {MAX_ATOMS})")]
    TooManyAtoms(usize),
    #[error("duplicate atomic proposition `{0}`")]
    DuplicateAtom(String),
    #[error("duplicate state declaration `{0}`")]
    DuplicateState(String),
    #[error("unknown state `{0}`")]
    UnknownState(String),
    #[error("unknown atomic proposition `{0}`")]
    UnknownAtom(String),
    #[error("transition relation is not total: state `{0}` has no successor")]
    NotTotal(String),
    #[error("structure has no initial state")]
    EmptyInit,
    #[error("atomic proposition sets differ")]
    AtomMismatch,
    #[error("relation references state index {index} outside a structure of {len} states")]
    DanglingState { index: usize, len: usize },
    #[error("partition does not match the structure: {0}")]
    InvalidPartition(String),
    #[error("partition is not stable: {0}")]
    UnstablePartition(String),
    #[error("structure has {size} states, above the limit of {limit}")]
    SizeCapExceeded { size: usize, limit: usize },
    #[error("grammar error: {0}")]
    Grammar(#[from] GrammarError),
}

/// Violations of the constraints a simple graph grammar must satisfy.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GrammarError {
    #[error("grammar arity must be positive")]
    ZeroArity,
    #[error("expected {expected} {what} declarations, found {found}")]
    Arity {
        what: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("{what} {index} declared more than once")]
    DuplicateIndex { what: &'static str, index: usize },
    #[error("{what} index {index} is outside 1..={n}")]
    IndexOutOfRange {
        what: &'static str,
        index: usize,
        n: usize,
    },
    #[error("distinguished states are not pairwise distinct: `{0}` used twice")]
    NotDistinct(String),
    #[error(
        "label constraint violated at {index}: exit {{{exit}}}, in {{{input}}}, out {{{output}}}"
    )]
    LabelConstraint {
        index: usize,
        exit: String,
        input: String,
        output: String,
    },
    #[error("restriction violated: edge {from} -> {to} leaves a boundary state")]
    Restriction { from: String, to: String },
    #[error("{fragment} state `{state}` has no successor")]
    MissingSuccessor {
        fragment: &'static str,
        state: String,
    },
    #[error("rule section must not declare initial states")]
    RuleInit,
    #[error("state name `{0}` collides after renaming")]
    NameCollision(String),
    #[error("unfolding depth must be at least 1")]
    ZeroDepth,
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
