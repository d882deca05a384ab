//! Crate-wide error type.

use thiserror::Error;

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong in this crate.
#[derive(Debug, Error)]
pub enum Error {
    /// Cube dimensions too small for the 3x3 neighborhood operations.
    #[error("cube is {height}x{width}; both sides must be at least 3")]
    CubeTooSmall { height: usize, width: usize },

    /// Buffer length does not match the declared dimensions.
    #[error("data length {got} does not match {expected} ({context})")]
    LengthMismatch {
        expected: usize,
        got: usize,
        context: &'static str,
    },

    /// Min-max normalization is undefined when every value is identical.
    #[error("cannot normalize a cube whose values are all equal")]
    ConstantCube,

    /// Patch center lies outside the image.
    #[error("patch center ({row}, {col}) outside a {height}x{width} image")]
    BadCenter {
        row: usize,
        col: usize,
        height: usize,
        width: usize,
    },

    /// Scene generation could not satisfy the requested class coverage.
    #[error("scene spec infeasible: {0}")]
    InfeasibleSpec(String),

    /// A raster sidecar disagrees with itself or with the payload.
    #[error("header mismatch: {0}")]
    HeaderMismatch(String),

    /// Binary payload is shorter than the sidecar promises.
    #[error("payload truncated: expected {expected} bytes, found {got}")]
    TruncatedPayload { expected: usize, got: usize },

    /// Image too small for a 3x3 convolution.
    #[error("image is {height}x{width}; Sobel needs at least 3x3")]
    ImageTooSmall { height: usize, width: usize },

    /// Two rasters that must share dimensions do not.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// Cosine similarity is undefined for a zero vector.
    #[error("cosine similarity undefined for a zero-norm vector")]
    ZeroVector,

    /// No labeled pixels were found where at least one is required.
    #[error("no labeled pixels present")]
    NoLabeledPixels,

    /// A prediction history was consulted before any prediction was recorded.
    #[error("history queue is empty")]
    EmptyHistory,

    /// A batch-level operation received an empty batch.
    #[error("empty batch")]
    EmptyBatch,

    /// Evaluation requires at least one test pixel.
    #[error("empty test set")]
    EmptyTestSet,

    /// A class has too few labeled pixels for the requested split.
    #[error("class {class} has {available} labeled pixels; the split needs {needed}")]
    InsufficientClass {
        class: u16,
        available: usize,
        needed: usize,
    },

    /// A vector meant to be a probability distribution is not one.
    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    /// Configuration value out of range or inconsistent.
    #[error("invalid config: {0}")]
    InvalidConfig(String),

    /// Checkpoint manifest and payload disagree.
    #[error("bad checkpoint: {0}")]
    BadCheckpoint(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("toml error: {0}")]
    Toml(#[from] toml::de::Error),
}
