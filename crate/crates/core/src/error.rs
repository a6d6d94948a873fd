use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("alphabet size must be at least 2, got {0}")]
    AlphabetTooSmall(u32),
    #[error("alphabet size {0} exceeds the supported maximum of 256")]
    AlphabetTooLarge(u32),
    #[error("word length must be at least 1")]
    EmptyWord,
    #[error("letter {letter} at position {position} is not below q = {q}")]
    LetterOutOfRange { letter: u32, position: usize, q: u32 },
    #[error("word has length {got}, expected {expected}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("duplicate word {0} in code")]
    DuplicateWord(String),
    #[error("a code needs at least one word")]
    EmptyCode,
    #[error("{0} is not prime; only prime fields are supported")]
    NotPrime(u32),
    #[error("operation requires a binary alphabet, got q = {0}")]
    NotBinary(u32),
    #[error("code size {size} out of range 1..={max}")]
    SizeOutOfRange { size: u64, max: u64 },
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("enumeration of {needed} boxes exceeds the budget of {cap}")]
    BudgetExceeded { needed: f64, cap: u64 },
    #[error("weights must be positive: {0}")]
    NonPositiveWeight(String),
    #[error("unknown word {0}")]
    UnknownWord(String),
    #[error("no sign change while bracketing the critical point")]
    NoBracket,
    #[error("unsupported neighbor count N = {0}: unknown regime (supported: 4, 6, 8)")]
    UnknownRegime(u32),
    #[error("critical exponent must be positive, got {0}")]
    NonPositiveExponent(f64),
    #[error("no Binder cumulant crossing between L = {l1} and L = {l2} in the temperature grid")]
    NoCrossing { l1: usize, l2: usize },
    #[error("numerical failure: {0}")]
    Numeric(String),
    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("I/O error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Io(e.to_string())
    }
}
