//! Weak/strong patch augmentation.
//!
//! Weak = random horizontal/vertical flips. Strong = the same flips plus
//! additive Gaussian noise clamped back into `[0, 1]`. Both views share the
//! flip draw so they depict the same geometry; only the noise differs.

use crate::hsicore::{Patch, SeededRng};

/// Two views of one source patch sharing a flip draw.
#[derive(Debug, Clone)]
pub struct AugmentedPair {
    pub weak: Patch,
    pub strong: Patch,
}

/// Mirrors a patch left-to-right.
pub fn flip_horizontal(patch: &Patch) -> Patch {
    let (s, b) = (patch.size(), patch.bands());
    let mut values = Vec::with_capacity(s * s * b);
    for row in 0..s {
        for col in 0..s {
            for band in 0..b {
                values.push(patch.at(row, s - 1 - col, band));
            }
        }
    }
    Patch::from_parts(s, b, values)
}

/// Mirrors a patch top-to-bottom.
pub fn flip_vertical(patch: &Patch) -> Patch {
    let (s, b) = (patch.size(), patch.bands());
    let mut values = Vec::with_capacity(s * s * b);
    for row in 0..s {
        for col in 0..s {
            for band in 0..b {
                values.push(patch.at(s - 1 - row, col, band));
            }
        }
    }
    Patch::from_parts(s, b, values)
}

/// Draws one augmented pair.
///
/// Two flip decisions are always consumed from `rng`; noise values are
/// drawn only when `sigma_s > 0`, so a zero scale yields `strong == weak`
/// without perturbing downstream draws.
pub fn augment(patch: &Patch, rng: &mut SeededRng, sigma_s: f64) -> AugmentedPair {
    assert!(sigma_s >= 0.0, "noise scale must be nonnegative");
    let flip_h = rng.next_f64() < 0.5;
    let flip_v = rng.next_f64() < 0.5;
    let mut weak = patch.clone();
    if flip_h {
        weak = flip_horizontal(&weak);
    }
    if flip_v {
        weak = flip_vertical(&weak);
    }
    let strong = if sigma_s > 0.0 {
        let values: Vec<f32> = weak
            .values()
            .iter()
            .map(|&v| {
                let noisy = v as f64 + rng.normal() * sigma_s;
                noisy.clamp(0.0, 1.0) as f32
            })
            .collect();
        Patch::from_parts(weak.size(), weak.bands(), values)
    } else {
        weak.clone()
    };
    AugmentedPair { weak, strong }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ramp_patch(size: usize, bands: usize) -> Patch {
        let values: Vec<f32> = (0..size * size * bands)
            .map(|i| (i % 97) as f32 / 97.0)
            .collect();
        Patch::from_parts(size, bands, values)
    }

    #[test]
    fn flips_are_involutions() {
        let patch = ramp_patch(5, 3);
        assert_eq!(
            flip_horizontal(&flip_horizontal(&patch)).values(),
            patch.values()
        );
        assert_eq!(
            flip_vertical(&flip_vertical(&patch)).values(),
            patch.values()
        );
    }

    #[test]
    fn horizontal_flip_mirrors_columns() {
        let patch = ramp_patch(3, 1);
        let flipped = flip_horizontal(&patch);
        for row in 0..3 {
            for col in 0..3 {
                assert_eq!(flipped.at(row, col, 0), patch.at(row, 2 - col, 0));
            }
        }
    }

    #[test]
    fn zero_noise_makes_identical_views() {
        let patch = ramp_patch(4, 2);
        let pair = augment(&patch, &mut SeededRng::new(9), 0.0);
        assert_eq!(pair.weak.values(), pair.strong.values());
    }

    #[test]
    fn same_seed_reproduces_the_pair() {
        let patch = ramp_patch(4, 2);
        let a = augment(&patch, &mut SeededRng::new(31), 0.1);
        let b = augment(&patch, &mut SeededRng::new(31), 0.1);
        assert_eq!(a.weak.values(), b.weak.values());
        assert_eq!(a.strong.values(), b.strong.values());
    }

    #[test]
    fn strong_view_stays_in_unit_range() {
        let patch = ramp_patch(6, 2);
        let pair = augment(&patch, &mut SeededRng::new(77), 5.0);
        for &v in pair.strong.values() {
            assert!((0.0..=1.0).contains(&v));
        }
        // Huge noise should actually clip something.
        assert!(pair
            .strong
            .values()
            .iter()
            .any(|&v| v == 0.0 || v == 1.0));
    }

    #[test]
    fn weak_view_is_a_flip_of_the_source() {
        let patch = ramp_patch(4, 1);
        let pair = augment(&patch, &mut SeededRng::new(3), 0.0);
        let candidates = [
            patch.values().to_vec(),
            flip_horizontal(&patch).values().to_vec(),
            flip_vertical(&patch).values().to_vec(),
            flip_vertical(&flip_horizontal(&patch)).values().to_vec(),
        ];
        assert!(candidates.iter().any(|c| c == &pair.weak.values().to_vec()));
    }
}
