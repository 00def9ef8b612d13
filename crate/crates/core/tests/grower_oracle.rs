mod support;

use lipseg::synth::{apply_lip_bias, apply_lip_gain, make_two_plateau, PlateauSpec};
use lipseg::{
    trim_to_homogeneous, Connectivity, Criterion, CriterionConfig, GrayImage, GrayScale, Point,
    Region,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use support::*;

const CONNECTIVITIES: [Connectivity; 2] = [Connectivity::Four, Connectivity::Eight];

#[test]
fn matches_naive_reference_on_random_images() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for case in 0..300 {
        let img = if case % 2 == 0 {
            random_u8_image(&mut rng, 8, 8)
        } else {
            random_palette_image(&mut rng, 8, 8, 5)
        };
        let seed = random_seed(&mut rng, &img);
        let c = CONNECTIVITIES[case % 2];
        for kind in Criterion::ALL {
            let t = random_threshold(&mut rng, kind);
            let result = grow_checked(&img, seed, kind, t, c);
            let (expected, iterations) = naive_grow(&img, seed, kind, t, c);
            assert_eq!(
                result.region.to_mask(),
                expected,
                "case {case} {kind} t={t}"
            );
            assert_eq!(result.iterations, iterations);
        }
    }
}

/// 5×5 instance: a 3×3 core of 100 with one bright outlier in its ring.
#[test]
fn single_outlier_is_the_only_trim() {
    let img = GrayImage::from_fn(5, 5, GrayScale::EIGHT_BIT, |x, y| match (x, y) {
        (2, 2) => 90.0,
        (1..=3, 1..=3) => 100.0,
        (4, 0) => 230.0,
        (0, 4) | (4, 4) => 230.0,
        (0, _) => 95.0,
        _ => 97.0,
    })
    .unwrap();
    let mut r = Region::for_image(&img);
    for y in 1..=3 {
        for x in 1..=3 {
            r.insert(Point::new(x, y), &img).unwrap();
        }
    }
    let ring = lipseg::dilate_ring(&r, &img, Connectivity::Eight);
    assert_eq!(ring.len(), 16);
    let crit = CriterionConfig::new(Criterion::LipAdditive, 20.0).unwrap();
    let (kept, trimmed) = trim_to_homogeneous(&r, &ring, &img, &crit);
    assert_eq!(
        trimmed,
        vec![Point::new(4, 0), Point::new(0, 4), Point::new(4, 4)]
    );

    // brute force: the largest homogeneous superset of r within r ∪ ring
    // that never keeps a 230 pixel while dropping a lower one.
    let m = 256.0;
    let mut best: Option<u32> = None;
    for subset in 0u32..(1 << ring.len()) {
        let mut vals: Vec<f64> = r.iter().map(|p| img.get(p)).collect();
        vals.extend(
            ring.iter()
                .enumerate()
                .filter(|(i, _)| subset & (1 << i) != 0)
                .map(|(_, &p)| img.get(p)),
        );
        let sup = vals.iter().cloned().fold(f64::MIN, f64::max);
        let inf = vals.iter().cloned().fold(f64::MAX, f64::min);
        if criterion_value(Criterion::LipAdditive, sup, inf, m) <= 20.0
            && best.is_none_or(|b| subset.count_ones() > b.count_ones())
        {
            best = Some(subset);
        }
    }
    let best = best.unwrap();
    assert_eq!(best.count_ones() as usize, kept.len() - r.len());
    for (i, p) in ring.iter().enumerate() {
        assert_eq!(best & (1 << i) != 0, kept.contains(*p));
    }
}

#[test]
fn flat_far_ring_is_fully_trimmed() {
    let img = GrayImage::from_fn(3, 3, GrayScale::EIGHT_BIT, |x, y| {
        if (x, y) == (1, 1) {
            10.0
        } else {
            150.0
        }
    })
    .unwrap();
    let mut r = Region::for_image(&img);
    r.insert(Point::new(1, 1), &img).unwrap();
    let ring = lipseg::dilate_ring(&r, &img, Connectivity::Eight);
    for kind in Criterion::ALL {
        let t = kind.neutral() + 0.5;
        let crit = CriterionConfig::new(kind, t).unwrap();
        let (kept, trimmed) = trim_to_homogeneous(&r, &ring, &img, &crit);
        assert_eq!(kept, r);
        assert_eq!(trimmed.len(), 8);
    }
}

#[test]
fn growth_is_illumination_invariant_on_real_images() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for case in 0..40 {
        let img = random_real_image(&mut rng, 12, 10, 6, 0.5, 255.5);
        let seed = random_seed(&mut rng, &img);
        let conn = CONNECTIVITIES[case % 2];

        let c = rng.gen_range(0.0..256.0);
        let t = random_threshold(&mut rng, Criterion::LipAdditive) / 3.0;
        let raw = grow_checked(&img, seed, Criterion::LipAdditive, t, conn);
        let biased = apply_lip_bias(&img, c).unwrap();
        let moved = grow_checked(&biased, seed, Criterion::LipAdditive, t, conn);
        assert_eq!(
            raw.region.to_mask(),
            moved.region.to_mask(),
            "bias case {case}"
        );

        let l = rng.gen_range(0.2..5.0);
        let t = 1.0 + rng.gen_range(0.0..1.5);
        let raw = grow_checked(&img, seed, Criterion::LipMultiplicative, t, conn);
        let gained = apply_lip_gain(&img, l).unwrap();
        let moved = grow_checked(&gained, seed, Criterion::LipMultiplicative, t, conn);
        assert_eq!(
            raw.region.to_mask(),
            moved.region.to_mask(),
            "gain case {case}"
        );
    }
}

#[test]
fn range_criterion_chains_across_a_biased_ramp() {
    let spec = PlateauSpec {
        width: 64,
        height: 32,
        val_a: 20.0,
        val_b: 60.0,
        ramp_width: 8,
    };
    let img = make_two_plateau(&spec, GrayScale::EIGHT_BIT).unwrap();
    let biased = apply_lip_bias(&img, 200.0).unwrap();
    let seed = Point::new(5, 16);
    let raw = grow_checked(
        &img,
        seed,
        Criterion::ClassicalRange,
        25.0,
        Connectivity::Eight,
    );
    let moved = grow_checked(
        &biased,
        seed,
        Criterion::ClassicalRange,
        25.0,
        Connectivity::Eight,
    );
    assert_ne!(raw.region.to_mask(), moved.region.to_mask());
    assert_eq!(moved.region.len(), 64 * 32);
}
