use thiserror::Error;

/// Errors reported by construction and decision procedures.
#[derive(Debug, Error)]
pub enum Error {
    #[error("empty alphabet")]
    EmptyAlphabet,
    #[error("duplicate character {0:?} in alphabet")]
    DuplicateChar(char),
    #[error("character {0:?} is not in the alphabet")]
    UnknownChar(char),
    #[error("state {0} out of range (automaton has {1} states)")]
    BadState(usize, usize),
    #[error("duplicate edge {0} -{1}-> {2}")]
    DuplicateEdge(usize, char, usize),
    #[error("automaton has no initial state")]
    NoInitialState,
    #[error("empty word in code")]
    EmptyCodeWord,
    #[error("duplicate word {0:?} in code")]
    DuplicateCodeWord(String),
    #[error("input is not a code: {0:?} has two factorizations")]
    NotACode(String),
    #[error("input is not a prefix code: {0:?} is a proper prefix of {1:?}")]
    NotAPrefixCode(String, String),
    #[error("alphabet mismatch: {0}")]
    AlphabetMismatch(String),
    #[error("no constant of length <= {0} found: code not synchronized within bound")]
    NotSynchronizedWithinBound(usize),
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("block map table does not cover {0:?}")]
    BlockMapIncomplete(String),
    #[error("the resulting shift is empty")]
    EmptyShift,
    #[error("all-zero period in generating sequence")]
    AllZeroPeriod,
    #[error("invalid generating sequence: {0}")]
    BadGeneratingSequence(String),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("invalid rational expression: {0}")]
    BadExpression(String),
    #[error("anchor state lies in a trivial strongly connected component")]
    TrivialAnchor,
    #[error("internal invariant violated: {0}")]
    Internal(String),
    #[error("{0}")]
    Io(#[from] std::io::Error),
    #[error("{0}")]
    Invalid(String),
}
