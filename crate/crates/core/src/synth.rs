//! Synthetic test images and LIP illumination transforms.

use crate::error::{ConfigError, ImageError};
use crate::image::GrayImage;
use crate::lip::{add_unchecked, scalar_mul_unchecked, GrayScale};

/// Two flat plateaus side by side, joined by a linear ramp.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlateauSpec {
    pub width: usize,
    pub height: usize,
    pub val_a: f64,
    pub val_b: f64,
    /// Columns interpolated between the plateaus.
    pub ramp_width: usize,
}

impl PlateauSpec {
    /// Column ranges `(a, ramp, b)`. Plateau A gets the smaller half of the
    /// non-ramp columns when they do not split evenly.
    pub fn column_layout(
        &self,
    ) -> (
        std::ops::Range<usize>,
        std::ops::Range<usize>,
        std::ops::Range<usize>,
    ) {
        let a_cols = (self.width - self.ramp_width) / 2;
        let ramp_end = a_cols + self.ramp_width;
        (0..a_cols, a_cols..ramp_end, ramp_end..self.width)
    }
}

pub fn make_two_plateau(spec: &PlateauSpec, scale: GrayScale) -> Result<GrayImage, ConfigError> {
    if spec.width == 0 || spec.height == 0 {
        return Err(ConfigError::Synth(format!(
            "dimensions must be positive, got {}x{}",
            spec.width, spec.height
        )));
    }
    if spec.ramp_width > spec.width {
        return Err(ConfigError::Synth(format!(
            "ramp width {} exceeds image width {}",
            spec.ramp_width, spec.width
        )));
    }
    scale.check(spec.val_a)?;
    scale.check(spec.val_b)?;

    let (a, ramp, _) = spec.column_layout();
    let steps = (spec.ramp_width + 1) as f64;
    let column_value = |x: usize| {
        if a.contains(&x) {
            spec.val_a
        } else if ramp.contains(&x) {
            let k = (x - ramp.start + 1) as f64;
            spec.val_a + (spec.val_b - spec.val_a) * k / steps
        } else {
            spec.val_b
        }
    };
    GrayImage::from_fn(spec.width, spec.height, scale, |x, _| column_value(x))
        .map_err(image_to_config)
}

/// Pixelwise LIP addition of the constant tone `c`.
pub fn apply_lip_bias(img: &GrayImage, c: f64) -> Result<GrayImage, ConfigError> {
    let scale = img.scale();
    scale.check(c)?;
    let bound = scale.bound();
    img.map(|_, v| add_unchecked(v, c, bound))
        .map_err(image_to_config)
}

/// Pixelwise LIP scalar multiplication by `lambda > 0`.
pub fn apply_lip_gain(img: &GrayImage, lambda: f64) -> Result<GrayImage, ConfigError> {
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(ConfigError::Gain(lambda));
    }
    let bound = img.scale().bound();
    img.map(|_, v| scalar_mul_unchecked(lambda, v, bound))
        .map_err(image_to_config)
}

/// LIP addition of a tone that varies linearly by column, from `c_left` at
/// column 0 to `c_right` at the last column.
pub fn apply_lip_bias_gradient(
    img: &GrayImage,
    c_left: f64,
    c_right: f64,
) -> Result<GrayImage, ConfigError> {
    if c_left == c_right {
        return apply_lip_bias(img, c_left);
    }
    let scale = img.scale();
    scale.check(c_left)?;
    scale.check(c_right)?;
    let bound = scale.bound();
    let span = img.width().saturating_sub(1).max(1) as f64;
    img.map(|p, v| {
        let s = p.x as f64 / span;
        let c = c_left * (1.0 - s) + c_right * s;
        add_unchecked(v, c, bound)
    })
    .map_err(image_to_config)
}

fn image_to_config(e: ImageError) -> ConfigError {
    match e {
        ImageError::Lip(l) => ConfigError::Lip(l),
        other => ConfigError::Synth(other.to_string()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::image::Point;
    use std::collections::BTreeMap;

    const M: GrayScale = GrayScale::EIGHT_BIT;

    fn spec(width: usize, height: usize, a: f64, b: f64, ramp: usize) -> PlateauSpec {
        PlateauSpec {
            width,
            height,
            val_a: a,
            val_b: b,
            ramp_width: ramp,
        }
    }

    #[test]
    fn equal_plateaus_without_ramp_are_constant() {
        let img = make_two_plateau(&spec(10, 4, 33.0, 33.0, 0), M).unwrap();
        assert!(img.pixels().iter().all(|&v| v == 33.0));
    }

    #[test]
    fn plateau_columns() {
        let img = make_two_plateau(&spec(64, 32, 20.0, 60.0, 8), M).unwrap();
        for y in 0..32 {
            for x in 0..64 {
                let v = img.get(Point::new(x, y));
                match x {
                    0..=27 => assert_eq!(v, 20.0),
                    36..=63 => assert_eq!(v, 60.0),
                    _ => assert!(v > 20.0 && v < 60.0, "ramp value {v} at column {x}"),
                }
            }
        }
    }

    #[test]
    fn histogram_is_plateaus_plus_ramp() {
        let img = make_two_plateau(&spec(64, 32, 20.0, 60.0, 8), M).unwrap();
        let mut hist: BTreeMap<u64, usize> = BTreeMap::new();
        for &v in img.pixels() {
            *hist.entry(v.to_bits()).or_default() += 1;
        }
        assert_eq!(hist.len(), 10);
        assert_eq!(hist[&20f64.to_bits()], 28 * 32);
        assert_eq!(hist[&60f64.to_bits()], 28 * 32);
        for k in 1..=8 {
            let v = 20.0 + 40.0 * k as f64 / 9.0;
            assert_eq!(hist[&v.to_bits()], 32);
        }
    }

    #[test]
    fn invalid_specs() {
        assert!(make_two_plateau(&spec(4, 4, 1.0, 2.0, 5), M).is_err());
        assert!(make_two_plateau(&spec(0, 4, 1.0, 2.0, 0), M).is_err());
        assert!(make_two_plateau(&spec(4, 4, 1.0, 256.0, 0), M).is_err());
    }

    #[test]
    fn bias_examples() {
        let img = make_two_plateau(&spec(8, 2, 20.0, 60.0, 0), M).unwrap();
        assert_eq!(apply_lip_bias(&img, 0.0).unwrap(), img);
        let biased = apply_lip_bias(&img, 200.0).unwrap();
        assert_eq!(biased.get(Point::new(0, 0)), 204.375);
        assert_eq!(biased.get(Point::new(7, 1)), 213.125);
        assert!(apply_lip_bias(&img, 256.0).is_err());
    }

    #[test]
    fn gain_examples() {
        let img = GrayImage::new(2, 1, M, vec![128.0, 40.0]).unwrap();
        assert_eq!(apply_lip_gain(&img, 1.0).unwrap(), img);
        let g = apply_lip_gain(&img, 2.0).unwrap();
        assert_eq!(g.get(Point::new(0, 0)), 192.0);
        let before = M.lmc(128.0, 40.0).unwrap();
        let after = M
            .lmc(g.get(Point::new(0, 0)), g.get(Point::new(1, 0)))
            .unwrap();
        assert!((before - after).abs() <= 1e-12 * before);
        assert!(apply_lip_gain(&img, 0.0).is_err());
        assert!(apply_lip_gain(&img, -1.0).is_err());
    }

    #[test]
    fn gradient_bias_boundaries() {
        let img = GrayImage::from_fn(7, 3, M, |x, y| (x * 30 + y) as f64).unwrap();
        assert_eq!(apply_lip_bias_gradient(&img, 0.0, 0.0).unwrap(), img);
        assert_eq!(
            apply_lip_bias_gradient(&img, 90.5, 90.5).unwrap(),
            apply_lip_bias(&img, 90.5).unwrap()
        );
        let g = apply_lip_bias_gradient(&img, 10.1, 170.3).unwrap();
        let left = apply_lip_bias(&img, 10.1).unwrap();
        let right = apply_lip_bias(&img, 170.3).unwrap();
        for y in 0..3 {
            assert_eq!(g.get(Point::new(0, y)), left.get(Point::new(0, y)));
            assert_eq!(g.get(Point::new(6, y)), right.get(Point::new(6, y)));
        }
    }
}
