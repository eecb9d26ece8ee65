use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("words must be nonempty")]
    EmptyWord,
    #[error("invalid alphabet {0:?}: expected 1 to 26 lowercase ASCII letters")]
    InvalidAlphabet(String),
    #[error("duplicate letter {0:?} in alphabet")]
    DuplicateLetter(char),
    #[error("letter {letter:?} is not in alphabet {alphabet:?}")]
    UnknownLetter { letter: char, alphabet: String },
    #[error("letter index {0} is out of range for the alphabet")]
    InvalidLetterIndex(u8),
    #[error("word {0:?} is not over the binary alphabet ab")]
    NotBinary(String),
    #[error("alphabet mismatch: expected {expected:?}, found {found:?}")]
    AlphabetMismatch { expected: String, found: String },
    #[error("malformed morphism {literal:?}: {reason}")]
    MalformedMorphism { literal: String, reason: String },
    #[error("{what} = {value} is out of range ({allowed})")]
    OutOfRange {
        what: &'static str,
        value: u64,
        allowed: String,
    },
    #[error("{0:?} is not a segment of the Thue-Morse word")]
    NotASegment(String),
    #[error("unknown suite {name:?} (known: {known})")]
    UnknownSuite { name: String, known: String },
    #[error("internal consistency failure: {0}")]
    Consistency(String),
}

impl Error {
    pub(crate) fn out_of_range(what: &'static str, value: impl TryInto<u64>, allowed: impl Into<String>) -> Self {
        Error::OutOfRange {
            what,
            value: value.try_into().unwrap_or(u64::MAX),
            allowed: allowed.into(),
        }
    }
}
