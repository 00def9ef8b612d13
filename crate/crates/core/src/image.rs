use std::fmt;

use crate::error::ImageError;
use crate::lip::GrayScale;

/// Pixel coordinate: `x` is the column, `y` the row, both 0-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point {
    pub x: usize,
    pub y: usize,
}

impl Point {
    pub const fn new(x: usize, y: usize) -> Self {
        Self { x, y }
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// Real-valued grayscale image on a rectangular domain.
///
/// Immutable once built; every pixel is a valid tone of `scale`.
#[derive(Debug, Clone, PartialEq)]
pub struct GrayImage {
    width: usize,
    height: usize,
    scale: GrayScale,
    pixels: Vec<f64>,
}

impl GrayImage {
    pub fn new(
        width: usize,
        height: usize,
        scale: GrayScale,
        pixels: Vec<f64>,
    ) -> Result<Self, ImageError> {
        if width == 0 || height == 0 {
            return Err(ImageError::EmptyDomain { width, height });
        }
        let expected = width
            .checked_mul(height)
            .ok_or(ImageError::EmptyDomain { width, height })?;
        if pixels.len() != expected {
            return Err(ImageError::PixelCount {
                expected,
                actual: pixels.len(),
            });
        }
        for &v in &pixels {
            scale.check(v)?;
        }
        Ok(Self {
            width,
            height,
            scale,
            pixels,
        })
    }

    /// Image filled with a single tone.
    pub fn constant(
        width: usize,
        height: usize,
        scale: GrayScale,
        value: f64,
    ) -> Result<Self, ImageError> {
        Self::new(width, height, scale, vec![value; width * height])
    }

    /// Builds an image by evaluating `f(x, y)` at every pixel.
    pub fn from_fn(
        width: usize,
        height: usize,
        scale: GrayScale,
        mut f: impl FnMut(usize, usize) -> f64,
    ) -> Result<Self, ImageError> {
        let mut pixels = Vec::with_capacity(width * height);
        for y in 0..height {
            for x in 0..width {
                pixels.push(f(x, y));
            }
        }
        Self::new(width, height, scale, pixels)
    }

    /// Applies `f` to every pixel value, keeping the domain and scale.
    pub fn map(&self, mut f: impl FnMut(Point, f64) -> f64) -> Result<Self, ImageError> {
        Self::from_fn(self.width, self.height, self.scale, |x, y| {
            f(Point::new(x, y), self.pixels[y * self.width + x])
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn scale(&self) -> GrayScale {
        self.scale
    }

    pub fn len(&self) -> usize {
        self.pixels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pixels.is_empty()
    }

    pub fn pixels(&self) -> &[f64] {
        &self.pixels
    }

    pub fn contains(&self, p: Point) -> bool {
        p.x < self.width && p.y < self.height
    }

    #[inline]
    pub fn index_of(&self, p: Point) -> usize {
        p.y * self.width + p.x
    }

    #[inline]
    pub fn point_of(&self, index: usize) -> Point {
        Point::new(index % self.width, index / self.width)
    }

    /// Value at `p`. Panics if `p` is outside the domain.
    #[inline]
    pub fn get(&self, p: Point) -> f64 {
        assert!(self.contains(p), "pixel {p} outside the image");
        self.pixels[self.index_of(p)]
    }

    #[inline]
    pub(crate) fn value_at(&self, index: usize) -> f64 {
        self.pixels[index]
    }
}
