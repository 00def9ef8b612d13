//! Test-only reference implementations shared by integration and acceptance
//! tests.
//!
//! `naive_grow` re-derives every quantity by scanning: the ring by testing
//! every pixel of the image, the extrema by scanning the candidate set after
//! every single removal. It shares nothing with the library's grower except
//! the `GrayImage` container and the trimming policy it is meant to check.

#![allow(dead_code)]

use lipseg::grower::TIE_RELATIVE_TOLERANCE;
use lipseg::{Connectivity, Criterion, GrayImage, GrayScale, Grower, GrowthResult, Point};
use rand::Rng;

pub fn criterion_value(kind: Criterion, sup: f64, inf: f64, m: f64) -> f64 {
    match kind {
        Criterion::ClassicalRange => sup - inf,
        Criterion::LipAdditive => (sup - inf) / (1.0 - inf / m),
        Criterion::LipMultiplicative => {
            if sup == inf {
                1.0
            } else if inf == 0.0 {
                f64::INFINITY
            } else {
                (1.0 - sup / m).ln() / (1.0 - inf / m).ln()
            }
        }
    }
}

fn neighbor_offsets(c: Connectivity) -> Vec<(i64, i64)> {
    let mut out = Vec::new();
    for dy in -1..=1i64 {
        for dx in -1..=1i64 {
            let keep = match c {
                Connectivity::Four => dx.abs() + dy.abs() == 1,
                Connectivity::Eight => (dx, dy) != (0, 0),
            };
            if keep {
                out.push((dx, dy));
            }
        }
    }
    out
}

fn extrema(values: impl Iterator<Item = f64>) -> Option<(f64, f64)> {
    values.fold(None, |acc, v| match acc {
        None => Some((v, v)),
        Some((s, i)) => Some((s.max(v), i.min(v))),
    })
}

/// Reference growth; returns the row-major membership mask and the number of
/// iterations run.
pub fn naive_grow(
    img: &GrayImage,
    seed: Point,
    kind: Criterion,
    t: f64,
    c: Connectivity,
) -> (Vec<bool>, usize) {
    let (w, h) = (img.width(), img.height());
    let m = img.scale().bound();
    let val = |i: usize| img.pixels()[i];
    let offsets = neighbor_offsets(c);
    let mut member = vec![false; w * h];
    member[seed.y * w + seed.x] = true;
    let mut iterations = 0;
    loop {
        iterations += 1;
        let mut ring: Vec<usize> = Vec::new();
        for y in 0..h as i64 {
            for x in 0..w as i64 {
                let i = (y as usize) * w + x as usize;
                if member[i] {
                    continue;
                }
                let touches = offsets.iter().any(|&(dx, dy)| {
                    let (nx, ny) = (x + dx, y + dy);
                    nx >= 0
                        && ny >= 0
                        && (nx as usize) < w
                        && (ny as usize) < h
                        && member[ny as usize * w + nx as usize]
                });
                if touches {
                    ring.push(i);
                }
            }
        }
        let (prot_sup, prot_inf) =
            extrema((0..w * h).filter(|&i| member[i]).map(val)).expect("seeded");
        loop {
            let all = (0..w * h)
                .filter(|&i| member[i])
                .chain(ring.iter().copied());
            let (sup, inf) = extrema(all.map(val)).unwrap();
            if criterion_value(kind, sup, inf, m) <= t {
                break;
            }
            let (ring_sup, ring_inf) = match extrema(ring.iter().map(|&i| val(i))) {
                Some(e) => e,
                None => break,
            };
            let sup_ok = ring_sup > prot_sup;
            let inf_ok = ring_inf < prot_inf;
            let drop_value = match (sup_ok, inf_ok) {
                (true, false) => ring_sup,
                (false, true) => ring_inf,
                (true, true) => {
                    let h_after = |drop: f64| {
                        let rest = (0..w * h)
                            .filter(|&i| member[i])
                            .chain(ring.iter().copied().filter(|&i| val(i) != drop));
                        let (s, i) = extrema(rest.map(val)).unwrap();
                        criterion_value(kind, s, i, m)
                    };
                    let (a, b) = (h_after(ring_sup), h_after(ring_inf));
                    let tie =
                        a == b || (a - b).abs() <= TIE_RELATIVE_TOLERANCE * a.abs().max(b.abs());
                    if a < b && !tie {
                        ring_sup
                    } else {
                        ring_inf
                    }
                }
                (false, false) => panic!("heterogeneous candidate with nothing removable"),
            };
            ring.retain(|&i| val(i) != drop_value);
        }
        if ring.is_empty() {
            return (member, iterations);
        }
        for i in ring {
            member[i] = true;
        }
    }
}

/// Runs the library grower step by step, asserting every structural
/// invariant along the way.
pub fn grow_checked(
    img: &GrayImage,
    seed: Point,
    kind: Criterion,
    t: f64,
    c: Connectivity,
) -> GrowthResult {
    let crit = lipseg::CriterionConfig::new(kind, t).unwrap();
    let m = img.scale().bound();
    let mut grower = Grower::new(img, seed, crit, c).unwrap();
    let budget = img.len();
    let mut steps = 0;
    loop {
        let before = grower.region().clone();
        let step = grower.step_detailed();
        steps += 1;
        let after = grower.region();
        for p in before.iter() {
            assert!(after.contains(p), "monotone growth violated at {p}");
        }
        for p in &step.trimmed {
            assert!(!before.contains(*p), "protected pixel {p} trimmed");
            assert!(
                step.ring.contains(p),
                "trimmed pixel {p} was not a candidate"
            );
        }
        let (s, i) = extrema(after.iter().map(|p| img.get(p))).unwrap();
        let h = criterion_value(kind, s, i, m);
        assert!(h <= t, "heterogeneity {h} above threshold {t}");
        assert!(
            lipseg::is_connected(after, c),
            "region disconnected after step {steps}"
        );
        assert!(steps <= budget, "iteration bound exceeded");
        if step.record.added() == 0 {
            break;
        }
    }
    let result = grower.run(budget);
    assert_eq!(result.iterations, 1, "fixpoint must be stable");
    let result = lipseg::grow(img, seed, crit, c, None).unwrap();
    assert_eq!(result.iterations, steps);
    assert!(result.region.contains(seed));
    assert!(result.iterations <= img.len());
    assert_eq!(result.termination, lipseg::Termination::Fixpoint);
    assert!(result.final_heterogeneity <= t);
    result
}

pub fn random_u8_image(rng: &mut impl Rng, w: usize, h: usize) -> GrayImage {
    GrayImage::from_fn(w, h, GrayScale::EIGHT_BIT, |_, _| {
        rng.gen_range(0..=255u8) as f64
    })
    .unwrap()
}

/// Image built from a handful of levels so that equal-valued ties occur.
pub fn random_palette_image(rng: &mut impl Rng, w: usize, h: usize, levels: usize) -> GrayImage {
    let palette: Vec<f64> = (0..levels)
        .map(|_| rng.gen_range(0..=255u8) as f64)
        .collect();
    GrayImage::from_fn(w, h, GrayScale::EIGHT_BIT, |_, _| {
        palette[rng.gen_range(0..levels)]
    })
    .unwrap()
}

/// Real-valued image drawn from a few random real levels in `[lo, hi)`.
pub fn random_real_image(
    rng: &mut impl Rng,
    w: usize,
    h: usize,
    levels: usize,
    lo: f64,
    hi: f64,
) -> GrayImage {
    let palette: Vec<f64> = (0..levels).map(|_| rng.gen_range(lo..hi)).collect();
    GrayImage::from_fn(w, h, GrayScale::EIGHT_BIT, |_, _| {
        palette[rng.gen_range(0..levels)]
    })
    .unwrap()
}

pub fn random_threshold(rng: &mut impl Rng, kind: Criterion) -> f64 {
    match kind {
        Criterion::ClassicalRange => rng.gen_range(0.0..120.0),
        Criterion::LipAdditive => rng.gen_range(0.0..160.0),
        Criterion::LipMultiplicative => rng.gen_range(1.0..6.0),
    }
}

pub fn random_seed(rng: &mut impl Rng, img: &GrayImage) -> Point {
    Point::new(
        rng.gen_range(0..img.width()),
        rng.gen_range(0..img.height()),
    )
}
