use thiserror::Error;

/// Errors raised by precondition violations across the library.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum Error {
    #[error("alphabet size mismatch: {0} vs {1}")]
    AlphabetMismatch(usize, usize),

    #[error("truncation level mismatch: {0} vs {1}")]
    LevelMismatch(usize, usize),

    #[error("letter {0} out of range 1..={1}")]
    LetterOutOfRange(u16, usize),

    #[error("term of degree {degree} exceeds truncation level {level}")]
    DegreeExceedsLevel { degree: usize, level: usize },

    #[error("truncation level {level} too small, need at least {required}")]
    LevelTooSmall { level: usize, required: usize },

    #[error("halfshuffle argument has a nonzero empty-word coefficient")]
    EmptyWordTerm,

    #[error("letter image has a nonzero empty-word coefficient")]
    ImageNotAugmented,

    #[error("series has zero empty-word coefficient, not invertible")]
    ZeroLeadingCoefficient,

    #[error("series empty-word coefficient must be {0}")]
    WrongLeadingCoefficient(&'static str),

    #[error("series is not grouplike")]
    NotGrouplike,

    #[error("series is not a Lie element")]
    NotLie,

    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    #[error("segment index {0} out of range for path with {1} segments")]
    SegmentOutOfRange(usize, usize),

    #[error("stop time must lie in [0, 1]")]
    StopTimeOutOfRange,

    #[error("polynomial has a nonzero constant term")]
    NonzeroConstantTerm,

    #[error("zero generator is not allowed")]
    ZeroGenerator,

    #[error("letter {0} has a zero image but is referenced by the argument")]
    ZeroImageReferenced(u16),

    #[error("matrices do not form a group: {0}")]
    NotAGroup(String),

    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
