//! Logarithmic image processing (LIP) arithmetic and seeded region growing
//! with illumination-invariant heterogeneity criteria.
//!
//! * [`lip`]: the LIP laws and the additive/multiplicative contrasts.
//! * [`region`]: regions with incrementally tracked extrema and the
//!   heterogeneity criteria.
//! * [`grower`]: the dilate-and-trim growth loop.
//! * [`synth`]: synthetic plateau images and LIP illumination transforms.
//! * [`imgio`]: PNM/LIPF input, mask/overlay/stats output.

pub mod error;
pub mod grower;
pub mod image;
pub mod imgio;
pub mod lip;
pub mod region;
pub mod synth;

pub use error::{ConfigError, GrowError, ImageError, IoError, LipError, RegionError};
pub use grower::{
    dilate_ring, grow, is_connected, trim_to_homogeneous, Connectivity, Grower, GrowthResult,
    IterationRecord, Termination,
};
pub use image::{GrayImage, Point};
pub use lip::GrayScale;
pub use region::{
    heterogeneity_additive, heterogeneity_multiplicative, heterogeneity_range, Criterion,
    CriterionConfig, Region,
};
