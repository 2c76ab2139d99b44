use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },
    #[error("position ({row}, {col}) outside a {rows}x{cols} matrix")]
    PositionOutOfBounds {
        row: usize,
        col: usize,
        rows: usize,
        cols: usize,
    },
    #[error("duplicate position ({row}, {col})")]
    DuplicatePosition { row: usize, col: usize },
    #[error("row weight {weight} exceeds the supported maximum of {max}")]
    RowWeightTooLarge { weight: usize, max: usize },
    #[error("circulant shift {shift} not below lift size {lift}")]
    ShiftOutOfRange { shift: usize, lift: usize },
    #[error("empty parity-check matrix")]
    EmptyMatrix,
    #[error("unknown code {0:?}")]
    UnknownCode(String),
    #[error("unknown CPM preset {0:?}")]
    UnknownPreset(String),
    #[error("punctured count {n_punct} must be below codeword length {n}")]
    TooManyPunctured { n_punct: usize, n: usize },
    #[error("overhead {delta_pct}% would push the punctured rate above 1")]
    RateAboveOne { delta_pct: f64 },
    #[error("target rate {target} is below the native rate {native}")]
    TargetBelowNative { native: f64, target: f64 },
    #[error("invalid rate: {0}")]
    InvalidRate(String),
    #[error("noise variance must be {requirement}, got {value}")]
    BadNoiseVariance {
        value: f64,
        requirement: &'static str,
    },
    #[error("non-finite LLR at index {0}")]
    NonFiniteLlr(usize),
    #[error("invalid CPM configuration: {0}")]
    InvalidCpm(String),
    #[error("invalid frame configuration: {0}")]
    InvalidFrame(String),
    #[error("invalid simulation configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Alist(#[from] AlistError),
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

/// Parse failure in an alist stream, with the 1-based line it occurred on.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlistError {
    #[error("line {line}: malformed header: {msg}")]
    MalformedHeader { line: usize, msg: String },
    #[error("line {line}: index {index} out of range 1..={max}")]
    IndexOutOfRange { line: usize, index: usize, max: usize },
    #[error("line {line}: duplicate index {index}")]
    DuplicateIndex { line: usize, index: usize },
    #[error("line {line}: {msg}")]
    ListMismatch { line: usize, msg: String },
    #[error("line {line}: expected an integer, found {token:?}")]
    BadToken { line: usize, token: String },
    #[error("unexpected end of input after line {line}")]
    UnexpectedEof { line: usize },
}
