//! Seeded region growing driven by a heterogeneity criterion.
//!
//! Each iteration dilates the current region by the connectivity
//! neighborhood, then trims the newly added pixels that attain the extreme
//! values of the candidate region until the criterion holds again. Growth
//! stops at the first iteration that adds nothing.
//!
//! Trimming policy, applied while the candidate region is heterogeneous:
//!
//! * a side (sup or inf) is removable when its extreme value is attained
//!   only by ring pixels, never by a pixel of the region being grown;
//! * if one side is removable, every ring pixel at that value is removed;
//! * if both are, the side whose removal yields the lower heterogeneity is
//!   removed, ties going to the inf side;
//! * if neither is, the candidate already satisfies the criterion.
//!
//! Trimmed pixels stay eligible and are offered again on the next iteration.

use std::collections::BTreeMap;
use std::collections::VecDeque;

use ordered_float::OrderedFloat;

use crate::error::GrowError;
use crate::image::{GrayImage, Point};
use crate::region::{CriterionConfig, Region};

/// Relative tolerance under which two candidate trims are considered
/// equally good.
///
/// Keeps the side choice stable when the two options tie exactly in real
/// arithmetic but differ in the last bits after an illumination transform.
pub const TIE_RELATIVE_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Connectivity {
    /// Edge-adjacent neighbors.
    Four,
    /// Edge- and corner-adjacent neighbors.
    #[default]
    Eight,
}

const N4: [(isize, isize); 4] = [(0, -1), (-1, 0), (1, 0), (0, 1)];
const N8: [(isize, isize); 8] = [
    (-1, -1),
    (0, -1),
    (1, -1),
    (-1, 0),
    (1, 0),
    (-1, 1),
    (0, 1),
    (1, 1),
];

impl Connectivity {
    pub fn offsets(self) -> &'static [(isize, isize)] {
        match self {
            Connectivity::Four => &N4,
            Connectivity::Eight => &N8,
        }
    }

    /// In-domain neighbors of `p` in a `width`×`height` grid.
    pub fn neighbors(self, p: Point, width: usize, height: usize) -> impl Iterator<Item = Point> {
        self.offsets().iter().filter_map(move |&(dx, dy)| {
            let x = p.x.checked_add_signed(dx)?;
            let y = p.y.checked_add_signed(dy)?;
            (x < width && y < height).then_some(Point::new(x, y))
        })
    }
}

/// Outer boundary of `r`: in-domain pixels adjacent to a member and not
/// themselves members, in row-major order.
pub fn dilate_ring(r: &Region, img: &GrayImage, c: Connectivity) -> Vec<Point> {
    ring_indices(r, img, c)
        .into_iter()
        .map(|i| img.point_of(i))
        .collect()
}

fn ring_indices(r: &Region, img: &GrayImage, c: Connectivity) -> Vec<usize> {
    let (w, h) = (img.width(), img.height());
    let mut ring = Vec::new();
    for &i in r.member_indices() {
        for q in c.neighbors(img.point_of(i), w, h) {
            let j = img.index_of(q);
            if !r.contains_index(j) {
                ring.push(j);
            }
        }
    }
    ring.sort_unstable();
    ring.dedup();
    ring
}

/// Adds `ring` to `r` and trims penalizing ring pixels until `crit` holds.
///
/// Returns the kept region and the trimmed pixels. Members of `r` are never
/// trimmed.
pub fn trim_to_homogeneous(
    r: &Region,
    ring: &[Point],
    img: &GrayImage,
    crit: &CriterionConfig,
) -> (Region, Vec<Point>) {
    let mut kept = r.clone();
    let mut indices: Vec<usize> = ring
        .iter()
        .map(|&p| img.index_of(p))
        .filter(|&i| !r.contains_index(i))
        .collect();
    indices.sort_unstable();
    indices.dedup();
    let trimmed = trim_in_place(&mut kept, &indices, img, crit);
    (kept, trimmed.into_iter().map(|i| img.point_of(i)).collect())
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Side {
    Sup,
    Inf,
}

fn trim_in_place(
    region: &mut Region,
    ring: &[usize],
    img: &GrayImage,
    crit: &CriterionConfig,
) -> Vec<usize> {
    let bound = img.scale().bound();
    let kind = crit.kind();
    let protected_sup = region.sup().unwrap_or(f64::NEG_INFINITY);
    let protected_inf = region.inf().unwrap_or(f64::INFINITY);

    let mut by_value: BTreeMap<OrderedFloat<f64>, Vec<usize>> = BTreeMap::new();
    for &i in ring {
        let v = img.value_at(i);
        region.insert_index(i, v);
        by_value.entry(OrderedFloat(v)).or_default().push(i);
    }

    let mut trimmed = Vec::new();
    while let (Some(sup), Some(inf)) = (region.sup(), region.inf()) {
        let h = kind.evaluate(sup, inf, bound);
        if crit.accepts(h) {
            break;
        }
        let sup_removable = by_value
            .last_key_value()
            .is_some_and(|(v, _)| v.0 > protected_sup);
        let inf_removable = by_value
            .first_key_value()
            .is_some_and(|(v, _)| v.0 < protected_inf);

        let side = match (sup_removable, inf_removable) {
            (true, false) => Side::Sup,
            (false, true) => Side::Inf,
            (true, true) => {
                // sup != inf here since h exceeds the single-value heterogeneity.
                let stats = region.stats();
                let next_sup = stats.next_below(sup).unwrap_or(inf);
                let next_inf = stats.next_above(inf).unwrap_or(sup);
                let h_drop_sup = kind.evaluate(next_sup, inf, bound);
                let h_drop_inf = kind.evaluate(sup, next_inf, bound);
                if h_drop_sup < h_drop_inf && !nearly_equal(h_drop_sup, h_drop_inf) {
                    Side::Sup
                } else {
                    Side::Inf
                }
            }
            (false, false) => {
                debug_assert!(false, "heterogeneous region with no removable side");
                break;
            }
        };

        let (value, pixels) = match side {
            Side::Sup => by_value.pop_last(),
            Side::Inf => by_value.pop_first(),
        }
        .expect("removable side has ring pixels");
        for i in pixels {
            region.remove_index(i, value.0);
            trimmed.push(i);
        }
    }
    trimmed.sort_unstable();
    trimmed
}

fn nearly_equal(a: f64, b: f64) -> bool {
    a == b || (a - b).abs() <= TIE_RELATIVE_TOLERANCE * a.abs().max(b.abs())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Termination {
    /// The last iteration added no pixel.
    Fixpoint,
    /// The iteration budget ran out first.
    MaxIterations,
}

impl Termination {
    pub fn name(self) -> &'static str {
        match self {
            Termination::Fixpoint => "fixpoint",
            Termination::MaxIterations => "max-iterations",
        }
    }
}

/// Summary of one growth iteration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IterationRecord {
    /// Ring pixels offered by the dilation.
    pub candidates: usize,
    /// Ring pixels removed by the trim step.
    pub trimmed: usize,
    /// Region size after the iteration.
    pub region_size: usize,
    /// Heterogeneity of the region after trimming.
    pub heterogeneity: f64,
}

impl IterationRecord {
    pub fn added(&self) -> usize {
        self.candidates - self.trimmed
    }
}

/// Full detail of one iteration, for callers that audit the process.
#[derive(Debug, Clone, PartialEq)]
pub struct Step {
    pub ring: Vec<Point>,
    pub trimmed: Vec<Point>,
    pub record: IterationRecord,
}

#[derive(Debug, Clone)]
pub struct GrowthResult {
    pub seed: Point,
    pub region: Region,
    pub iterations: usize,
    pub final_heterogeneity: f64,
    pub termination: Termination,
    pub trace: Vec<IterationRecord>,
}

/// Incremental growth state; [`grow`] runs it to completion.
#[derive(Debug, Clone)]
pub struct Grower<'a> {
    img: &'a GrayImage,
    crit: CriterionConfig,
    connectivity: Connectivity,
    seed: Point,
    region: Region,
}

impl<'a> Grower<'a> {
    pub fn new(
        img: &'a GrayImage,
        seed: Point,
        crit: CriterionConfig,
        connectivity: Connectivity,
    ) -> Result<Self, GrowError> {
        if !img.contains(seed) {
            return Err(GrowError::SeedOutOfBounds {
                seed,
                width: img.width(),
                height: img.height(),
            });
        }
        // Revalidate in case the config was built for another criterion.
        let crit = CriterionConfig::new(crit.kind(), crit.threshold())?;
        let mut region = Region::for_image(img);
        let index = img.index_of(seed);
        region.insert_index(index, img.value_at(index));
        Ok(Self {
            img,
            crit,
            connectivity,
            seed,
            region,
        })
    }

    pub fn region(&self) -> &Region {
        &self.region
    }

    pub fn heterogeneity(&self) -> f64 {
        self.region
            .heterogeneity(self.crit.kind(), self.img)
            .expect("grown region always holds the seed")
    }

    /// Runs one dilate-and-trim iteration.
    pub fn step(&mut self) -> IterationRecord {
        let ring = ring_indices(&self.region, self.img, self.connectivity);
        let trimmed = trim_in_place(&mut self.region, &ring, self.img, &self.crit);
        self.record(ring.len(), trimmed.len())
    }

    /// Like [`Grower::step`], also returning the ring and trimmed pixels.
    pub fn step_detailed(&mut self) -> Step {
        let ring = ring_indices(&self.region, self.img, self.connectivity);
        let trimmed = trim_in_place(&mut self.region, &ring, self.img, &self.crit);
        let record = self.record(ring.len(), trimmed.len());
        Step {
            ring: ring.into_iter().map(|i| self.img.point_of(i)).collect(),
            trimmed: trimmed.into_iter().map(|i| self.img.point_of(i)).collect(),
            record,
        }
    }

    fn record(&self, candidates: usize, trimmed: usize) -> IterationRecord {
        IterationRecord {
            candidates,
            trimmed,
            region_size: self.region.len(),
            heterogeneity: self.heterogeneity(),
        }
    }

    /// Iterates until a step adds nothing or `max_iters` steps have run.
    pub fn run(mut self, max_iters: usize) -> GrowthResult {
        let mut trace = Vec::new();
        let termination = loop {
            if trace.len() >= max_iters {
                break Termination::MaxIterations;
            }
            let record = self.step();
            trace.push(record);
            if record.added() == 0 {
                break Termination::Fixpoint;
            }
        };
        GrowthResult {
            seed: self.seed,
            final_heterogeneity: self.heterogeneity(),
            iterations: trace.len(),
            termination,
            trace,
            region: self.region,
        }
    }
}

/// Default iteration budget: every non-final iteration adds at least one
/// pixel, so `width × height` iterations always reach the fixpoint.
pub fn default_max_iters(img: &GrayImage) -> usize {
    img.len()
}

/// Grows a region from `seed` until it stops changing.
///
/// `max_iters` defaults to [`default_max_iters`].
pub fn grow(
    img: &GrayImage,
    seed: Point,
    crit: CriterionConfig,
    connectivity: Connectivity,
    max_iters: Option<usize>,
) -> Result<GrowthResult, GrowError> {
    let grower = Grower::new(img, seed, crit, connectivity)?;
    Ok(grower.run(max_iters.unwrap_or_else(|| default_max_iters(img))))
}

/// Whether `r` is a single connected component under `c`. The empty region
/// counts as connected.
pub fn is_connected(r: &Region, c: Connectivity) -> bool {
    let Some(start) = r.iter().next() else {
        return true;
    };
    let (w, h) = (r.width(), r.height());
    let mut seen = vec![false; w * h];
    let mut queue = VecDeque::from([start]);
    seen[start.y * w + start.x] = true;
    let mut reached = 1;
    while let Some(p) = queue.pop_front() {
        for q in c.neighbors(p, w, h) {
            let j = q.y * w + q.x;
            if !seen[j] && r.contains(q) {
                seen[j] = true;
                reached += 1;
                queue.push_back(q);
            }
        }
    }
    reached == r.len()
}
