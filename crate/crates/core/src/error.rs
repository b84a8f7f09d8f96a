use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParams(String),

    #[error("non-finite sample {value} at position {position}")]
    NonFinite { position: usize, value: f64 },

    #[error("empty sample")]
    EmptySample,

    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("series too short: need at least {required} samples, got {actual}")]
    SeriesTooShort { required: usize, actual: usize },

    #[error("bad magic bytes {0:02x?}")]
    BadMagic([u8; 4]),

    #[error("unsupported stream version {0}")]
    UnsupportedVersion(u8),

    #[error("malformed header: {0}")]
    BadHeader(String),

    #[error("stream truncated at byte {offset}: needed {needed} more bytes")]
    Truncated { offset: usize, needed: usize },

    #[error("corrupt stream at byte {offset}: {reason}")]
    Corrupt { offset: usize, reason: String },

    #[error("{0} trailing bytes after end of stream")]
    TrailingBytes(usize),
}
