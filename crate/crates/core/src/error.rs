use std::io;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("map rule index {0} out of range (expected 1..=8)")]
    InvalidRule(i64),

    #[error("digit {0} out of range (expected 0..=3)")]
    InvalidDigit(u8),

    #[error("invalid logistic parameters: {0}")]
    InvalidParams(String),

    #[error("logistic orbit degenerated at step {step}: state {value} left (0, 1)")]
    KeystreamDegenerate { step: usize, value: f64 },

    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("geometry mismatch: {left_w}x{left_h} vs {right_w}x{right_h}")]
    GeometryMismatch {
        left_w: usize,
        left_h: usize,
        right_w: usize,
        right_h: usize,
    },

    #[error("image must have non-zero width and height")]
    EmptyImage,

    #[error("malformed PPM: {0}")]
    Ppm(String),

    #[error("malformed key file: {0}")]
    KeyFile(String),

    #[error("malformed equivalent-key file: {0}")]
    EquivalentKeyFile(String),

    #[error(transparent)]
    Io(#[from] io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
