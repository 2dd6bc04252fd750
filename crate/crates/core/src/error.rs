use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("modality {0} out of range (expected 1 or 2)")]
    ModalityOutOfRange(u32),
    #[error("unsupported logic {0:?} (expected one of D, T, D4, S4)")]
    UnsupportedLogic(String),
    #[error("guard exceeded: {what} is {actual}, limit {limit}")]
    Guard {
        what: &'static str,
        actual: u64,
        limit: u64,
    },
    #[error("budget exceeded: {what} needs {needed} items, budget {budget}")]
    Budget {
        what: &'static str,
        needed: u64,
        budget: u64,
    },
    #[error("letter {letter} not in alphabet {alphabet}")]
    BranchingMismatch { letter: i32, alphabet: String },
    #[error("signed and unsigned sequences cannot be mixed")]
    SignednessMismatch,
    #[error("unknown world {0:?}")]
    UnknownWorld(String),
    #[error("unknown atom {0:?}")]
    UnknownAtom(String),
    #[error("invalid frame: {0}")]
    InvalidFrame(String),
    #[error("modality count mismatch: {0} vs {1}")]
    ModalityMismatch(usize, usize),
    #[error("map is not a bounded morphism: {0}")]
    NotAMorphism(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("{0} does not apply to frame kind {1}")]
    Inapplicable(&'static str, String),
    #[error("internal check failed: {0}")]
    Internal(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
