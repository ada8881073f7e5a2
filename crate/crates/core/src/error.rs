use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("pattern must be nonempty")]
    EmptyPattern,

    #[error("factor {factor:?} occurs {found} time(s) in a window of {window} symbols, need at least 2")]
    InsufficientWindow {
        factor: String,
        found: usize,
        window: usize,
    },

    #[error("continued fraction supplies {available} coefficient(s), {needed} required")]
    InsufficientCoefficients { needed: usize, available: usize },

    #[error("continued fraction has no period; exact value unavailable")]
    NonPeriodic,

    #[error("morphism index must be >= 1, got {0}")]
    InvalidIndex(u32),

    #[error("symbol {0:?} is not in the domain")]
    UnknownSymbol(char),

    #[error("invalid alphabet: {0}")]
    InvalidAlphabet(String),

    #[error("morphism is not prolongable on {0:?}")]
    NotProlongable(char),

    #[error("kappa sequence reaches only {reachable} symbols, {requested} requested")]
    SequenceTooShort { requested: usize, reachable: String },

    #[error("index {index} out of range 1..={len}")]
    OutOfRange { index: usize, len: usize },

    #[error("window cap {cap} exceeded before cylinder of depth {n} recurred")]
    WindowCapExceeded { n: usize, cap: usize },

    #[error("quadratic values with different radicands ({0} and {1})")]
    RadicandMismatch(u64, u64),

    #[error("value out of range: {0}")]
    Domain(String),

    #[error("word source is a fixed finite text of {available} symbols, {requested} requested")]
    NotExtendable { requested: usize, available: usize },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("generation cancelled")]
    Cancelled,
}
