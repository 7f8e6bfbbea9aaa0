use crate::rational::Rational;
use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid alphabet: {0}")]
    InvalidAlphabet(String),
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("alphabets differ: {0}")]
    AlphabetMismatch(String),
    #[error("malformed rational `{0}`")]
    MalformedRational(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("invalid automaton: {0}")]
    InvalidAutomaton(String),
    #[error("invalid machine: {0}")]
    InvalidMachine(String),
    #[error("cannot decode stack value {0}: not a codeword")]
    NotACodeword(String),
    #[error("dimacs line {line}: {message}")]
    Dimacs { line: usize, message: String },
    #[error("word length {got} does not match the {expected} variables of the formula")]
    LengthMismatch { expected: usize, got: usize },
    #[error("epsilon {0} outside (0, 1/4)")]
    EpsilonOutOfRange(Rational),
    #[error("slack s = {s} outside [k-1, k) for k = {k}")]
    SlackOutOfRange { s: Rational, k: usize },
    #[error("output gadget needs a unary alphabet, got {0} symbols")]
    NotUnary(usize),
    #[error("interval enclosure cannot decide `{0}` even at {1} bits")]
    ExactnessUnavailable(String, u32),
    #[error("language declared consistent but cumulative mass reached {0} > 1")]
    InconsistencyDetected(Rational),
    #[error("model `{0}` is not declared consistent")]
    NotDeclaredConsistent(&'static str),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
