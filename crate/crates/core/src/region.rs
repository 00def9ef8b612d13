//! Regions with incrementally maintained extrema, and the heterogeneity
//! criteria evaluated on them.

use std::collections::btree_map::{BTreeMap, Entry};
use std::fmt;
use std::num::NonZeroUsize;

use ordered_float::OrderedFloat;

use crate::error::{ConfigError, RegionError};
use crate::image::{GrayImage, Point};
use crate::lip::{lac_unchecked, lmc_unchecked};

/// Ordered multiset of gray tones.
///
/// Insert, remove, min and max are all `O(log n)` in the number of distinct
/// values.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ToneMultiset {
    counts: BTreeMap<OrderedFloat<f64>, NonZeroUsize>,
    len: usize,
}

impl ToneMultiset {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn insert(&mut self, v: f64) {
        match self.counts.entry(OrderedFloat(v)) {
            Entry::Vacant(e) => {
                e.insert(NonZeroUsize::MIN);
            }
            Entry::Occupied(mut e) => {
                let c = e.get_mut();
                *c = c.checked_add(1).expect("multiplicity overflow");
            }
        }
        self.len += 1;
    }

    /// Removes one occurrence of `v`. Returns false if `v` was absent.
    pub fn remove(&mut self, v: f64) -> bool {
        match self.counts.entry(OrderedFloat(v)) {
            Entry::Vacant(_) => false,
            Entry::Occupied(mut e) => {
                match NonZeroUsize::new(e.get().get() - 1) {
                    Some(c) => *e.get_mut() = c,
                    None => {
                        e.remove();
                    }
                }
                self.len -= 1;
                true
            }
        }
    }

    pub fn min(&self) -> Option<f64> {
        self.counts.first_key_value().map(|(k, _)| k.0)
    }

    pub fn max(&self) -> Option<f64> {
        self.counts.last_key_value().map(|(k, _)| k.0)
    }

    /// Largest distinct value strictly below `v`.
    pub fn next_below(&self, v: f64) -> Option<f64> {
        self.counts
            .range(..OrderedFloat(v))
            .next_back()
            .map(|(k, _)| k.0)
    }

    /// Smallest distinct value strictly above `v`.
    pub fn next_above(&self, v: f64) -> Option<f64> {
        use std::ops::Bound::{Excluded, Unbounded};
        self.counts
            .range((Excluded(OrderedFloat(v)), Unbounded))
            .next()
            .map(|(k, _)| k.0)
    }

    /// Number of occurrences of `v`.
    pub fn count(&self, v: f64) -> usize {
        self.counts.get(&OrderedFloat(v)).map_or(0, |c| c.get())
    }
}

const ABSENT: usize = usize::MAX;

/// A set of pixels of one image together with the ordered multiset of their
/// values.
///
/// Membership tests, insertion and removal are `O(1)` on the pixel set plus
/// `O(log n)` on the value statistics. Members are kept in a dense list so
/// iteration costs `O(|region|)` rather than `O(|image|)`.
#[derive(Debug, Clone)]
pub struct Region {
    width: usize,
    height: usize,
    /// Position of each pixel in `members`, or `ABSENT`.
    slot: Vec<usize>,
    members: Vec<usize>,
    stats: ToneMultiset,
}

impl Region {
    /// Empty region over a `width`×`height` domain.
    pub fn new(width: usize, height: usize) -> Self {
        Self {
            width,
            height,
            slot: vec![ABSENT; width * height],
            members: Vec::new(),
            stats: ToneMultiset::new(),
        }
    }

    /// Empty region over the domain of `img`.
    pub fn for_image(img: &GrayImage) -> Self {
        Self::new(img.width(), img.height())
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, p: Point) -> bool {
        p.x < self.width && p.y < self.height && self.slot[p.y * self.width + p.x] != ABSENT
    }

    #[inline]
    pub(crate) fn contains_index(&self, index: usize) -> bool {
        self.slot[index] != ABSENT
    }

    /// Member pixels, in insertion-dependent order.
    pub fn iter(&self) -> impl Iterator<Item = Point> + '_ {
        self.members
            .iter()
            .map(move |&i| Point::new(i % self.width, i / self.width))
    }

    /// Members sorted in row-major order.
    pub fn sorted_points(&self) -> Vec<Point> {
        let mut idx = self.members.clone();
        idx.sort_unstable();
        idx.into_iter()
            .map(|i| Point::new(i % self.width, i / self.width))
            .collect()
    }

    pub(crate) fn member_indices(&self) -> &[usize] {
        &self.members
    }

    /// Row-major membership mask.
    pub fn to_mask(&self) -> Vec<bool> {
        self.slot.iter().map(|&s| s != ABSENT).collect()
    }

    pub fn stats(&self) -> &ToneMultiset {
        &self.stats
    }

    /// Supremum of the member values.
    pub fn sup(&self) -> Option<f64> {
        self.stats.max()
    }

    /// Infimum of the member values.
    pub fn inf(&self) -> Option<f64> {
        self.stats.min()
    }

    fn check_domain(&self, p: Point, img: &GrayImage) -> Result<usize, RegionError> {
        if img.width() != self.width || img.height() != self.height {
            return Err(RegionError::DimensionMismatch);
        }
        if !img.contains(p) {
            return Err(RegionError::OutOfDomain(p));
        }
        Ok(img.index_of(p))
    }

    pub fn insert(&mut self, p: Point, img: &GrayImage) -> Result<(), RegionError> {
        let index = self.check_domain(p, img)?;
        if self.contains_index(index) {
            return Err(RegionError::DuplicateMember(p));
        }
        self.insert_index(index, img.value_at(index));
        Ok(())
    }

    pub fn remove(&mut self, p: Point, img: &GrayImage) -> Result<(), RegionError> {
        let index = self.check_domain(p, img)?;
        if !self.contains_index(index) {
            return Err(RegionError::NotAMember(p));
        }
        self.remove_index(index, img.value_at(index));
        Ok(())
    }

    /// Inserts a pixel known to be in the domain and absent.
    pub(crate) fn insert_index(&mut self, index: usize, value: f64) {
        debug_assert_eq!(self.slot[index], ABSENT);
        self.slot[index] = self.members.len();
        self.members.push(index);
        self.stats.insert(value);
    }

    /// Removes a pixel known to be a member.
    pub(crate) fn remove_index(&mut self, index: usize, value: f64) {
        let pos = self.slot[index];
        debug_assert_ne!(pos, ABSENT);
        self.members.swap_remove(pos);
        if let Some(&moved) = self.members.get(pos) {
            self.slot[moved] = pos;
        }
        self.slot[index] = ABSENT;
        let removed = self.stats.remove(value);
        debug_assert!(removed);
    }

    /// Heterogeneity of the region under `kind`, from the maintained extrema.
    pub fn heterogeneity(&self, kind: Criterion, img: &GrayImage) -> Result<f64, RegionError> {
        if img.width() != self.width || img.height() != self.height {
            return Err(RegionError::DimensionMismatch);
        }
        match (self.sup(), self.inf()) {
            (Some(sup), Some(inf)) => Ok(kind.evaluate(sup, inf, img.scale().bound())),
            _ => Err(RegionError::Empty),
        }
    }
}

impl PartialEq for Region {
    /// Two regions are equal when they cover the same pixels of same-sized
    /// domains.
    fn eq(&self, other: &Self) -> bool {
        self.width == other.width
            && self.height == other.height
            && self.members.len() == other.members.len()
            && self.members.iter().all(|&i| other.contains_index(i))
    }
}

impl Eq for Region {}

/// LIP-additive heterogeneity: the additive contrast between the region's
/// extreme values.
pub fn heterogeneity_additive(r: &Region, img: &GrayImage) -> Result<f64, RegionError> {
    r.heterogeneity(Criterion::LipAdditive, img)
}

/// LIP-multiplicative heterogeneity: the multiplicative contrast between the
/// region's extreme values. `+inf` when the region mixes 0 with positive
/// tones.
pub fn heterogeneity_multiplicative(r: &Region, img: &GrayImage) -> Result<f64, RegionError> {
    r.heterogeneity(Criterion::LipMultiplicative, img)
}

/// Plain gray-level range `sup - inf`.
pub fn heterogeneity_range(r: &Region, img: &GrayImage) -> Result<f64, RegionError> {
    r.heterogeneity(Criterion::ClassicalRange, img)
}

/// Region heterogeneity criterion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Criterion {
    /// `sup - inf`, not illumination invariant.
    ClassicalRange,
    /// Invariant under LIP addition of a constant.
    LipAdditive,
    /// Invariant under LIP multiplication by a positive scalar.
    LipMultiplicative,
}

impl Criterion {
    pub const ALL: [Criterion; 3] = [
        Criterion::ClassicalRange,
        Criterion::LipAdditive,
        Criterion::LipMultiplicative,
    ];

    /// Heterogeneity given a region's extreme values. Requires `inf <= sup`.
    #[inline]
    pub fn evaluate(self, sup: f64, inf: f64, bound: f64) -> f64 {
        match self {
            Criterion::ClassicalRange => sup - inf,
            Criterion::LipAdditive => lac_unchecked(sup, inf, bound),
            Criterion::LipMultiplicative => lmc_unchecked(sup, inf, bound),
        }
    }

    /// Heterogeneity of a single-pixel region.
    pub fn neutral(self) -> f64 {
        match self {
            Criterion::ClassicalRange | Criterion::LipAdditive => 0.0,
            Criterion::LipMultiplicative => 1.0,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Criterion::ClassicalRange => "range",
            Criterion::LipAdditive => "lip-add",
            Criterion::LipMultiplicative => "lip-mul",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|c| c.name() == name)
    }
}

impl fmt::Display for Criterion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A criterion paired with its homogeneity threshold.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CriterionConfig {
    kind: Criterion,
    threshold: f64,
}

impl CriterionConfig {
    pub fn new(kind: Criterion, threshold: f64) -> Result<Self, ConfigError> {
        let err = |reason| ConfigError::Threshold {
            criterion: kind.name(),
            threshold,
            reason,
        };
        if threshold.is_nan() {
            return Err(err("threshold is NaN"));
        }
        if threshold < kind.neutral() {
            return Err(err(match kind {
                Criterion::LipMultiplicative => "must be at least 1",
                _ => "must be non-negative",
            }));
        }
        Ok(Self { kind, threshold })
    }

    pub fn kind(&self) -> Criterion {
        self.kind
    }

    pub fn threshold(&self) -> f64 {
        self.threshold
    }

    #[inline]
    pub fn accepts(&self, heterogeneity: f64) -> bool {
        heterogeneity <= self.threshold
    }
}
