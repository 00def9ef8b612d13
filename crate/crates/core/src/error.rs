use std::path::PathBuf;

use thiserror::Error;

use crate::image::Point;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LipError {
    #[error("gray tone {value} outside [0, {bound})")]
    InvalidGrayTone { value: f64, bound: f64 },
    #[error("scale bound must be a positive finite real, got {0}")]
    InvalidBound(f64),
    #[error("LIP subtraction by the scale bound is singular")]
    SingularDenominator,
    #[error("unsupported scalar {0}: only finite non-negative scalars are allowed")]
    UnsupportedScalar(f64),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ImageError {
    #[error(transparent)]
    Lip(#[from] LipError),
    #[error("image dimensions must be positive, got {width}x{height}")]
    EmptyDomain { width: usize, height: usize },
    #[error("expected {expected} pixels for the given dimensions, got {actual}")]
    PixelCount { expected: usize, actual: usize },
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RegionError {
    #[error("region is empty")]
    Empty,
    #[error("pixel {0} is already a member of the region")]
    DuplicateMember(Point),
    #[error("pixel {0} is not a member of the region")]
    NotAMember(Point),
    #[error("pixel {0} lies outside the image domain")]
    OutOfDomain(Point),
    #[error("region and image dimensions differ")]
    DimensionMismatch,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConfigError {
    #[error("invalid threshold {threshold} for {criterion}: {reason}")]
    Threshold {
        criterion: &'static str,
        threshold: f64,
        reason: &'static str,
    },
    #[error("invalid synthetic image spec: {0}")]
    Synth(String),
    #[error("LIP gain must be a positive finite real, got {0}")]
    Gain(f64),
    #[error(transparent)]
    Lip(#[from] LipError),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GrowError {
    #[error("seed {seed} outside the {width}x{height} image")]
    SeedOutOfBounds {
        seed: Point,
        width: usize,
        height: usize,
    },
    #[error(transparent)]
    Config(#[from] ConfigError),
}

#[derive(Debug, Error)]
pub enum IoError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: unrecognized image format")]
    UnknownFormat { path: PathBuf },
    #[error("{path}: malformed image: {reason}")]
    Malformed { path: PathBuf, reason: String },
    #[error("{path}: truncated image data")]
    Truncated { path: PathBuf },
    #[error("{path}: unsupported bit depth (maxval {maxval} > 255)")]
    UnsupportedDepth { path: PathBuf, maxval: u32 },
    #[error("{path}: {source}")]
    Image { path: PathBuf, source: ImageError },
    #[error("{path}: {source}")]
    Json {
        path: PathBuf,
        source: serde_json::Error,
    },
}
