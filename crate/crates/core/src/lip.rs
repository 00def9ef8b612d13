//! Scalar LIP algebra on gray tones.
//!
//! Gray tones live in `[0, M)` where `M` is the scale bound of a
//! [`GrayScale`]. The three laws (addition, subtraction, scalar
//! multiplication) and the two pairwise logarithmic contrasts are exposed as
//! methods on the scale so that `M` is never passed around separately.
//!
//! Every checked method validates its gray-tone inputs. The `*_unchecked`
//! free functions skip validation and are what the region statistics and the
//! grower call on values that were validated at image construction.

use crate::error::LipError;

/// Scale bound used for all 8-bit data.
pub const EIGHT_BIT_BOUND: f64 = 256.0;

/// The gray scale `[0, M)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GrayScale {
    bound: f64,
}

impl Default for GrayScale {
    fn default() -> Self {
        Self::EIGHT_BIT
    }
}

impl GrayScale {
    pub const EIGHT_BIT: GrayScale = GrayScale {
        bound: EIGHT_BIT_BOUND,
    };

    pub fn new(bound: f64) -> Result<Self, LipError> {
        if bound.is_finite() && bound > 0.0 {
            Ok(Self { bound })
        } else {
            Err(LipError::InvalidBound(bound))
        }
    }

    /// The scale bound `M`.
    #[inline]
    pub fn bound(&self) -> f64 {
        self.bound
    }

    #[inline]
    pub fn contains(&self, v: f64) -> bool {
        (0.0..self.bound).contains(&v)
    }

    pub fn check(&self, v: f64) -> Result<f64, LipError> {
        if self.contains(v) {
            Ok(v)
        } else {
            Err(LipError::InvalidGrayTone {
                value: v,
                bound: self.bound,
            })
        }
    }

    /// `a ⊕ b = a + b - ab/M`.
    pub fn add(&self, a: f64, b: f64) -> Result<f64, LipError> {
        Ok(add_unchecked(self.check(a)?, self.check(b)?, self.bound))
    }

    /// `a ⊖ b = (a - b) / (1 - b/M)`, the inverse of [`GrayScale::add`].
    ///
    /// The result is negative when `a < b`; callers decide whether that is
    /// meaningful for them.
    pub fn sub(&self, a: f64, b: f64) -> Result<f64, LipError> {
        let a = self.check(a)?;
        let b = self.check(b)?;
        let denom = 1.0 - b / self.bound;
        if denom == 0.0 {
            return Err(LipError::SingularDenominator);
        }
        Ok((a - b) / denom)
    }

    /// `λ ⊗ a = M - M (1 - a/M)^λ`, rejecting negative `λ`.
    pub fn scalar_mul(&self, lambda: f64, a: f64) -> Result<f64, LipError> {
        if !lambda.is_finite() || lambda < 0.0 {
            return Err(LipError::UnsupportedScalar(lambda));
        }
        Ok(scalar_mul_unchecked(lambda, self.check(a)?, self.bound))
    }

    /// Scalar multiplication that also accepts negative `λ`.
    ///
    /// For `λ < 0` the result is negative (outside the gray scale) whenever
    /// `a > 0`, so it is returned as a plain real.
    pub fn scalar_mul_signed(&self, lambda: f64, a: f64) -> Result<f64, LipError> {
        if !lambda.is_finite() {
            return Err(LipError::UnsupportedScalar(lambda));
        }
        Ok(scalar_mul_unchecked(lambda, self.check(a)?, self.bound))
    }

    /// Logarithmic additive contrast of a pair of tones.
    pub fn lac(&self, x: f64, y: f64) -> Result<f64, LipError> {
        let (x, y) = (self.check(x)?, self.check(y)?);
        Ok(lac_unchecked(x.max(y), x.min(y), self.bound))
    }

    /// Logarithmic multiplicative contrast of a pair of tones.
    ///
    /// Equal tones give 1 (including `(0, 0)`); a zero tone paired with a
    /// positive one gives `+inf`.
    pub fn lmc(&self, x: f64, y: f64) -> Result<f64, LipError> {
        let (x, y) = (self.check(x)?, self.check(y)?);
        Ok(lmc_unchecked(x.max(y), x.min(y), self.bound))
    }
}

/// Largest `f64` strictly below `bound`.
///
/// Results that are mathematically below `bound` but round up to it are
/// pinned here so the laws stay closed on `[0, M)`.
#[inline]
fn below(bound: f64, v: f64) -> f64 {
    if v < bound {
        v
    } else {
        bound.next_down()
    }
}

#[inline]
pub(crate) fn add_unchecked(a: f64, b: f64, bound: f64) -> f64 {
    below(bound, a + b - a * b / bound)
}

#[inline]
pub(crate) fn scalar_mul_unchecked(lambda: f64, a: f64, bound: f64) -> f64 {
    if lambda == 1.0 {
        return a;
    }
    // M - M(1 - a/M)^λ, in a form that stays accurate for small results;
    // `+ 0.0` turns a negative zero into zero.
    let v = -bound * (lambda * (-a / bound).ln_1p()).exp_m1() + 0.0;
    if lambda < 0.0 {
        v
    } else {
        below(bound, v)
    }
}

/// `(sup - inf) / (1 - inf/M)`; requires `inf <= sup`.
#[inline]
pub(crate) fn lac_unchecked(sup: f64, inf: f64, bound: f64) -> f64 {
    (sup - inf) / (1.0 - inf / bound)
}

/// `ln(1 - sup/M) / ln(1 - inf/M)`; requires `inf <= sup`.
#[inline]
pub(crate) fn lmc_unchecked(sup: f64, inf: f64, bound: f64) -> f64 {
    if sup == inf {
        return 1.0;
    }
    if inf == 0.0 {
        return f64::INFINITY;
    }
    // ln_1p keeps precision for tones near zero.
    (-sup / bound).ln_1p() / (-inf / bound).ln_1p()
}
