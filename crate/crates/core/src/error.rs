use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid alphabet: {0}")]
    InvalidAlphabet(String),

    #[error("symbol {symbol:?} is not in the alphabet {alphabet:?}")]
    UnknownSymbol { symbol: char, alphabet: String },

    #[error("words are over different alphabets ({left:?} vs {right:?})")]
    AlphabetMismatch { left: String, right: String },

    #[error("operation requires a nonempty word")]
    EmptyWord,

    #[error("position {position} is out of range 1..={len}")]
    PositionOutOfRange { position: usize, len: usize },

    #[error("morphism is not prolongable: {0}")]
    NotProlongable(String),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("bad word descriptor {descriptor:?}: {reason}")]
    BadDescriptor { descriptor: String, reason: String },

    #[error("insufficient window: {0}")]
    InsufficientWindow(String),

    #[error("oracle length guard exceeded: |w| = {len} > {max}")]
    OracleGuard { len: usize, max: usize },

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("I/O error on {path}: {message}")]
    Io { path: String, message: String },

    #[error("bad config: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
