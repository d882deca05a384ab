//! Synthetic ground-truth scenes.
//!
//! A scene is a Voronoi partition of the image plane into contiguous
//! single-class cells, filled with smooth per-class spectral signatures plus
//! optional white noise. Scenes come with complete pixel labels, which makes
//! every downstream stage testable against exact ground truth.

use crate::error::{Error, Result};
use crate::hsicore::{HsiCube, LabelMap, SeededRng};

/// Parameters of a synthetic scene.
#[derive(Debug, Clone, PartialEq)]
pub struct SceneSpec {
    pub height: usize,
    pub width: usize,
    pub bands: usize,
    pub num_classes: u16,
    /// Expected pixels per Voronoi cell; controls how many cells are placed.
    pub region_granularity: f64,
    /// Euclidean distance between any two class signatures.
    pub signature_separation: f64,
    /// Standard deviation of per-value additive Gaussian noise; 0 disables it.
    pub noise_sigma: f64,
}

impl SceneSpec {
    /// Checks the structural rules without generating anything.
    pub fn validate(&self) -> Result<()> {
        if self.height < 3 || self.width < 3 {
            return Err(Error::CubeTooSmall {
                height: self.height,
                width: self.width,
            });
        }
        if self.num_classes == 0 {
            return Err(Error::InvalidConfig("a scene needs at least one class".into()));
        }
        if usize::from(self.num_classes) >= self.bands {
            return Err(Error::InvalidConfig(format!(
                "{} classes need at least {} bands for distinct smooth signatures",
                self.num_classes,
                usize::from(self.num_classes) + 1
            )));
        }
        if !(self.region_granularity > 0.0) {
            return Err(Error::InvalidConfig("region_granularity must be positive".into()));
        }
        if !(self.signature_separation > 0.0) {
            return Err(Error::InvalidConfig("signature_separation must be positive".into()));
        }
        if self.noise_sigma < 0.0 {
            return Err(Error::InvalidConfig("noise_sigma cannot be negative".into()));
        }
        Ok(())
    }
}

/// Smooth spectral signature for each class, pairwise separated by at least
/// `spec.signature_separation` in Euclidean distance.
///
/// Class `c` rides on the `c`-th cosine harmonic around a per-class baseline.
/// The harmonics are orthonormal (and zero-mean), so the harmonic part alone
/// puts every pair at the requested distance; the baselines are spread around
/// 0.5 so classes also differ in their band mean. Without that, the mean
/// grayscale image would be flat and class boundaries invisible to gradient
/// operators, which is not how distinct materials behave.
pub fn class_signatures(spec: &SceneSpec) -> Vec<Vec<f64>> {
    let b = spec.bands as f64;
    let k = spec.num_classes;
    let delta = spec.signature_separation / std::f64::consts::SQRT_2;
    let spread = spec.signature_separation / 4.0;
    (1..=k)
        .map(|c| {
            let baseline = if k == 1 {
                0.5
            } else {
                0.5 + spread * (2.0 * f64::from(c - 1) / f64::from(k - 1) - 1.0)
            };
            (0..spec.bands)
                .map(|band| {
                    let harmonic = (std::f64::consts::PI * f64::from(c) * (band as f64 + 0.5) / b)
                        .cos()
                        * (2.0 / b).sqrt();
                    baseline + delta * harmonic
                })
                .collect()
        })
        .collect()
}

/// Places `n` cell sites with a best-candidate rule: each new site is the
/// most isolated of several uniform proposals, which keeps cells from
/// collapsing into slivers.
fn place_sites(n: usize, height: usize, width: usize, rng: &mut SeededRng) -> Vec<(f64, f64)> {
    const CANDIDATES: usize = 8;
    let mut sites: Vec<(f64, f64)> = Vec::with_capacity(n);
    for i in 0..n {
        if i == 0 {
            sites.push((rng.next_f64() * height as f64, rng.next_f64() * width as f64));
            continue;
        }
        let mut best = (0.0, 0.0);
        let mut best_dist = f64::NEG_INFINITY;
        for _ in 0..CANDIDATES {
            let cand = (rng.next_f64() * height as f64, rng.next_f64() * width as f64);
            let nearest = sites
                .iter()
                .map(|s| (s.0 - cand.0).powi(2) + (s.1 - cand.1).powi(2))
                .fold(f64::INFINITY, f64::min);
            if nearest > best_dist {
                best_dist = nearest;
                best = cand;
            }
        }
        sites.push(best);
    }
    sites
}

/// Generates a labeled scene from `spec`.
///
/// Each Voronoi cell takes one class; classes are dealt round-robin over the
/// shuffled cells so every class appears. If any class ends up below 1% of
/// the pixels the sites are redrawn, up to 10 attempts, after which the
/// parameters are reported as infeasible. The same parameters and seed
/// always produce the same scene, bit for bit.
pub fn generate_scene(spec: &SceneSpec, rng: &mut SeededRng) -> Result<(HsiCube, LabelMap)> {
    spec.validate()?;
    let num_pixels = spec.height * spec.width;
    let k = usize::from(spec.num_classes);
    let num_sites = ((num_pixels as f64 / spec.region_granularity).round() as usize).max(k).max(1);

    let mut site_rng = rng.derive(0x517E5);
    let mut assignment: Vec<u16> = Vec::new();
    let mut feasible = false;
    for _attempt in 0..10 {
        let sites = place_sites(num_sites, spec.height, spec.width, &mut site_rng);
        let mut site_class: Vec<u16> = (0..num_sites).map(|i| (i % k) as u16 + 1).collect();
        site_rng.shuffle(&mut site_class);

        assignment = vec![0; num_pixels];
        let mut counts = vec![0usize; k];
        for y in 0..spec.height {
            for x in 0..spec.width {
                let (py, px) = (y as f64 + 0.5, x as f64 + 0.5);
                let mut best = 0usize;
                let mut best_d = f64::INFINITY;
                for (i, s) in sites.iter().enumerate() {
                    let d = (s.0 - py).powi(2) + (s.1 - px).powi(2);
                    if d < best_d {
                        best_d = d;
                        best = i;
                    }
                }
                let class = site_class[best];
                assignment[y * spec.width + x] = class;
                counts[usize::from(class) - 1] += 1;
            }
        }
        if counts.iter().all(|&c| 100 * c >= num_pixels) {
            feasible = true;
            break;
        }
    }
    if !feasible {
        return Err(Error::InfeasibleSpec(format!(
            "could not give each of {} classes at least 1% of {} pixels in 10 attempts",
            spec.num_classes, num_pixels
        )));
    }

    let signatures = class_signatures(spec);
    let mut noise_rng = rng.derive(0x4015E);
    let mut data = Vec::with_capacity(num_pixels * spec.bands);
    for &class in &assignment {
        let sig = &signatures[usize::from(class) - 1];
        if spec.noise_sigma == 0.0 {
            data.extend(sig.iter().map(|&v| v as f32));
        } else {
            data.extend(
                sig.iter()
                    .map(|&v| (v + spec.noise_sigma * noise_rng.normal()) as f32),
            );
        }
    }

    let cube = HsiCube::new(spec.height, spec.width, spec.bands, data)?;
    let labels = LabelMap::new(spec.height, spec.width, assignment)?;
    Ok((cube, labels))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_spec() -> SceneSpec {
        SceneSpec {
            height: 32,
            width: 32,
            bands: 8,
            num_classes: 4,
            region_granularity: 120.0,
            signature_separation: 0.5,
            noise_sigma: 0.0,
        }
    }

    #[test]
    fn signatures_sit_at_least_the_requested_separation_apart() {
        let spec = small_spec();
        let sigs = class_signatures(&spec);
        for i in 0..sigs.len() {
            for j in (i + 1)..sigs.len() {
                let d: f64 = sigs[i]
                    .iter()
                    .zip(&sigs[j])
                    .map(|(a, b)| (a - b) * (a - b))
                    .sum::<f64>()
                    .sqrt();
                assert!(d >= spec.signature_separation - 1e-12, "pair ({i},{j}): {d}");
            }
        }
    }

    #[test]
    fn signatures_differ_in_band_mean_so_boundaries_are_visible_in_gray() {
        let spec = small_spec();
        let sigs = class_signatures(&spec);
        let means: Vec<f64> = sigs
            .iter()
            .map(|s| s.iter().sum::<f64>() / s.len() as f64)
            .collect();
        let min_step = spec.signature_separation / 2.0 / (sigs.len() as f64 - 1.0);
        for i in 0..means.len() {
            for j in (i + 1)..means.len() {
                assert!(
                    (means[i] - means[j]).abs() >= min_step - 1e-12,
                    "classes {i},{j} have means {} and {}",
                    means[i],
                    means[j]
                );
            }
        }
    }

    #[test]
    fn zero_noise_pixels_equal_their_signature_exactly() {
        let spec = small_spec();
        let mut rng = SeededRng::new(9);
        let (cube, labels) = generate_scene(&spec, &mut rng).unwrap();
        let sigs = class_signatures(&spec);
        for y in 0..spec.height {
            for x in 0..spec.width {
                let class = labels.at(y, x);
                let sig = &sigs[usize::from(class) - 1];
                for b in 0..spec.bands {
                    assert_eq!(cube.at(y, x, b), sig[b] as f32);
                }
            }
        }
    }

    #[test]
    fn every_class_reaches_one_percent_coverage() {
        let spec = small_spec();
        let mut rng = SeededRng::new(3);
        let (_, labels) = generate_scene(&spec, &mut rng).unwrap();
        let n = labels.labels().len();
        for class in 1..=spec.num_classes {
            let count = labels.labels().iter().filter(|&&l| l == class).count();
            assert!(100 * count >= n, "class {class} covers only {count}/{n}");
        }
    }

    #[test]
    fn same_spec_and_seed_reproduce_the_scene_bit_for_bit() {
        let mut spec = small_spec();
        spec.noise_sigma = 0.1;
        let (c1, l1) = generate_scene(&spec, &mut SeededRng::new(77)).unwrap();
        let (c2, l2) = generate_scene(&spec, &mut SeededRng::new(77)).unwrap();
        assert_eq!(c1, c2);
        assert_eq!(l1, l2);
    }

    #[test]
    fn labels_form_contiguous_single_class_cells() {
        // Each Voronoi cell is convex, hence 4-connected; check that each
        // class's pixels split into few components rather than salt-and-pepper.
        let spec = small_spec();
        let mut rng = SeededRng::new(5);
        let (_, labels) = generate_scene(&spec, &mut rng).unwrap();
        let (h, w) = (labels.height(), labels.width());
        let mut seen = vec![false; h * w];
        let mut components = 0;
        for start in 0..h * w {
            if seen[start] {
                continue;
            }
            components += 1;
            let class = labels.labels()[start];
            let mut stack = vec![start];
            seen[start] = true;
            while let Some(p) = stack.pop() {
                let (y, x) = (p / w, p % w);
                let mut push = |q: usize| {
                    if !seen[q] && labels.labels()[q] == class {
                        seen[q] = true;
                        stack.push(q);
                    }
                };
                if y > 0 {
                    push(p - w);
                }
                if y + 1 < h {
                    push(p + w);
                }
                if x > 0 {
                    push(p - 1);
                }
                if x + 1 < w {
                    push(p + 1);
                }
            }
        }
        // 32*32/120 ~ 9 cells; same-class cells may touch and merge, so the
        // component count can only be at most the cell count.
        assert!(components <= 9, "{components} components");
    }

    #[test]
    fn too_many_classes_for_the_band_count_is_invalid() {
        let mut spec = small_spec();
        spec.num_classes = 8;
        assert!(matches!(
            generate_scene(&spec, &mut SeededRng::new(1)),
            Err(Error::InvalidConfig(_))
        ));
    }

    #[test]
    fn impossible_coverage_is_infeasible_after_retries() {
        // 101 classes can never all reach 1% coverage, whatever the layout.
        let spec = SceneSpec {
            height: 16,
            width: 16,
            bands: 128,
            num_classes: 101,
            region_granularity: 2.0,
            signature_separation: 0.2,
            noise_sigma: 0.0,
        };
        assert!(matches!(
            generate_scene(&spec, &mut SeededRng::new(1)),
            Err(Error::InfeasibleSpec(_))
        ));
    }
}
