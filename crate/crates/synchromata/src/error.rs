use std::fmt;

use crate::words::{Letter, Word};

/// Crate-wide error type.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    MissingTransition {
        state: String,
        letter: Letter,
    },
    DuplicateTransition {
        state: String,
        letter: Letter,
    },
    LetterOutOfRange {
        state: String,
        letter: Letter,
        alphabet: usize,
    },
    DuplicateState(String),
    UnknownState(String),
    EmptyAlphabet,
    AlphabetMismatch {
        left: usize,
        right: usize,
    },
    /// Some state's output map collides, so no inverse automaton exists.
    NonInvertibleState(String),
    /// Evidence: a state pair and a word cycling it without merging.
    NotSynchronizing {
        pair: (String, String),
        cycle: Word,
    },
    BudgetExceeded(String),
    /// The fixed-state check of the level map failed for this word.
    NoFixedState(Word),
    EmptyWord,
    LengthMismatch {
        left: usize,
        right: usize,
    },
    /// The level map at this level is not a permutation.
    NotAPermutation(usize),
    NotWellDefined(String),
    HypothesesNotMet(Vec<String>),
    WrongAlphabet {
        expected: usize,
        found: usize,
    },
    UnknownName(String),
    InvalidGroupTable(String),
    BlockMismatch(String),
    NotSynchronizingPart(String),
    VerificationFailed(String),
    PreconditionUnmet(String),
    Parse {
        line: usize,
        message: String,
    },
    Io(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::MissingTransition { state, letter } => {
                write!(f, "state {state} has no transition for letter {letter}")
            }
            Error::DuplicateTransition { state, letter } => {
                write!(f, "state {state} defines letter {letter} twice")
            }
            Error::LetterOutOfRange {
                state,
                letter,
                alphabet,
            } => {
                write!(
                    f,
                    "letter {letter} at state {state} is outside the alphabet 0..{alphabet}"
                )
            }
            Error::DuplicateState(name) => write!(f, "duplicate state name {name}"),
            Error::UnknownState(name) => write!(f, "unknown state {name}"),
            Error::EmptyAlphabet => write!(f, "alphabet size must be at least 1"),
            Error::AlphabetMismatch { left, right } => {
                write!(f, "alphabet sizes differ: {left} vs {right}")
            }
            Error::NonInvertibleState(name) => {
                write!(
                    f,
                    "state {name} is not a local permutation; no inverse exists"
                )
            }
            Error::NotSynchronizing { pair, cycle } => write!(
                f,
                "not synchronizing: pair {{{},{}}} survives the cycle word {}",
                pair.0, pair.1, cycle
            ),
            Error::BudgetExceeded(what) => write!(f, "budget exceeded: {what}"),
            Error::NoFixedState(word) => {
                write!(f, "no fixed state for word {word}; machine is not core")
            }
            Error::EmptyWord => write!(f, "the empty word is not allowed here"),
            Error::LengthMismatch { left, right } => {
                write!(f, "word lengths differ: {left} vs {right}")
            }
            Error::NotAPermutation(level) => {
                write!(f, "the level-{level} word map is not a permutation")
            }
            Error::NotWellDefined(what) => write!(f, "not well defined: {what}"),
            Error::HypothesesNotMet(clauses) => {
                write!(f, "hypotheses not met: {}", clauses.join("; "))
            }
            Error::WrongAlphabet { expected, found } => {
                write!(f, "alphabet size {found}, expected {expected}")
            }
            Error::UnknownName(name) => write!(f, "unknown example name {name}"),
            Error::InvalidGroupTable(msg) => write!(f, "invalid group table: {msg}"),
            Error::BlockMismatch(msg) => write!(f, "block mismatch: {msg}"),
            Error::NotSynchronizingPart(name) => {
                write!(f, "combination part {name} is not synchronizing")
            }
            Error::VerificationFailed(msg) => write!(f, "verification failed: {msg}"),
            Error::PreconditionUnmet(msg) => write!(f, "precondition unmet: {msg}"),
            Error::Parse { line, message } => write!(f, "parse error at line {line}: {message}"),
            Error::Io(msg) => write!(f, "io error: {msg}"),
        }
    }
}

impl std::error::Error for Error {}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
