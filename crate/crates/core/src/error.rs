use thiserror::Error;

/// Errors produced by the numeral-system, embedding, image and metric layers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("value {value} cannot be encoded (representable range is 0..={max})")]
    Encoding { value: u64, max: u64 },

    #[error("bit string has length {actual}, expected {expected}")]
    Length { expected: usize, actual: usize },

    #[error("message needs {required} eligible pixels but only {available} are available")]
    Capacity { required: u64, available: u64 },

    #[error("corrupt stego stream: declared {declared} bits but only {available} eligible pixels remain")]
    CorruptStream { declared: u64, available: u64 },

    #[error("PGM parse error at byte {offset}: {reason}")]
    Parse { offset: usize, reason: String },

    #[error("image dimensions differ: {0}x{1} vs {2}x{3}")]
    DimensionMismatch(usize, usize, usize, usize),

    #[error("image is empty")]
    EmptyImage,
}

pub type Result<T> = std::result::Result<T, Error>;
