//! Edge-aware superpixel label propagation.
//!
//! Works in two stages over a superpixel segmentation:
//!
//! 1. Regions containing labeled pixels take the majority label. The rest
//!    are matched to per-class mean-spectrum prototypes by cosine
//!    similarity, discounted by the region's mean edge intensity
//!    (`sim / (1 + e)`): a region full of edges is a less trustworthy
//!    spectral witness.
//! 2. Each similarity-labeled region is then revised by its neighbors. Every
//!    neighbor votes for its own stage-1 label with weight `1 / (e_k + eps)`,
//!    so smooth interior neighbors dominate and edge-heavy ones barely
//!    count. Majority regions are anchors and never change.
//!
//! The stage-2 region labels expand to pixels (true labels win where
//! present) and a class-balanced sample of pseudo-labeled pixels becomes the
//! unlabeled training pool.

use crate::edgemap::RegionEdgeIntensity;
use crate::error::{Error, Result};
use crate::hsicore::{HsiCube, LabelMap, SeededRng};
use crate::superpixel::SuperpixelSegmentation;
use std::collections::BTreeSet;

/// Weight regularizer in the neighbor vote: `1 / (e_k + EDGE_EPSILON)`.
pub const EDGE_EPSILON: f64 = 1e-6;

/// Mean spectrum of one class's labeled pixels.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassSpectralPrototype {
    pub class_id: u16,
    pub mean_spectrum: Vec<f64>,
}

/// How a region got its label.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    /// Contains labeled pixels; majority vote, never revised.
    Majority,
    /// Matched to a class prototype by penalized cosine similarity.
    Similarity,
    /// Similarity label overturned by the stage-2 neighbor vote.
    Corrected,
}

/// Full output of the propagation pipeline.
#[derive(Debug, Clone)]
pub struct PseudoLabelState {
    /// Region label after prototype matching.
    pub stage1_region_labels: Vec<u16>,
    /// Region label after neighbor correction.
    pub stage2_region_labels: Vec<u16>,
    /// Per-pixel pseudo-labels (true labels kept where present).
    pub pixel_pseudo_labels: Vec<u16>,
    /// Per-region provenance after both stages.
    pub provenance: Vec<Provenance>,
}

/// Class-balanced pool of pseudo-labeled pixels.
#[derive(Debug, Clone, PartialEq)]
pub struct BalancedSample {
    /// Classes in ascending id order, one entry per sampled class.
    pub classes: Vec<u16>,
    /// Flat pixel indices drawn for each class, aligned with `classes`.
    pub pixels_per_class: Vec<Vec<usize>>,
    /// Classes skipped because no pseudo-labeled pixel carried them.
    pub skipped: Vec<u16>,
}

impl BalancedSample {
    /// All drawn pixels with their pseudo-labels, class-major order.
    pub fn flattened(&self) -> Vec<(usize, u16)> {
        let mut out = Vec::new();
        for (class, pixels) in self.classes.iter().zip(&self.pixels_per_class) {
            out.extend(pixels.iter().map(|&p| (p, *class)));
        }
        out
    }
}

/// Mean spectrum per labeled class, ascending class id.
///
/// Fails with [`Error::NoLabeledPixels`] when the map is all zeros and with
/// [`Error::ZeroVector`] when a class mean has zero norm (it could never be
/// cosine-matched).
pub fn class_prototypes(cube: &HsiCube, labels: &LabelMap) -> Result<Vec<ClassSpectralPrototype>> {
    if cube.height() != labels.height() || cube.width() != labels.width() {
        return Err(Error::DimensionMismatch(format!(
            "cube is {}x{}, labels are {}x{}",
            cube.height(),
            cube.width(),
            labels.height(),
            labels.width()
        )));
    }
    let labeled = labels.labeled_pixels();
    if labeled.is_empty() {
        return Err(Error::NoLabeledPixels);
    }
    let bands = cube.bands();
    let mut out = Vec::new();
    let mut i = 0;
    while i < labeled.len() {
        let class_id = labeled[i].1;
        let mut sum = vec![0.0f64; bands];
        let mut count = 0usize;
        while i < labeled.len() && labeled[i].1 == class_id {
            for (s, &v) in sum.iter_mut().zip(cube.spectrum_at(labeled[i].0)) {
                *s += v as f64;
            }
            count += 1;
            i += 1;
        }
        let mean_spectrum: Vec<f64> = sum.iter().map(|&s| s / count as f64).collect();
        if mean_spectrum.iter().map(|v| v * v).sum::<f64>() == 0.0 {
            return Err(Error::ZeroVector);
        }
        out.push(ClassSpectralPrototype {
            class_id,
            mean_spectrum,
        });
    }
    Ok(out)
}

/// Majority label of the labeled pixels inside each region, or `None` for
/// regions without any. Ties go to the smaller class id.
pub fn majority_propagate(seg: &SuperpixelSegmentation, labels: &LabelMap) -> Vec<Option<u16>> {
    let k = usize::from(labels.num_classes());
    let mut counts = vec![0u32; seg.num_regions() * k];
    for (p, &r) in seg.assignment.iter().enumerate() {
        let label = labels.labels()[p];
        if label != 0 {
            counts[r as usize * k + usize::from(label) - 1] += 1;
        }
    }
    (0..seg.num_regions())
        .map(|r| {
            let row = &counts[r * k..(r + 1) * k];
            let top = row.iter().copied().max().unwrap_or(0);
            if top == 0 {
                None
            } else {
                // position() returns the first maximum: the smallest class id.
                row.iter().position(|&c| c == top).map(|i| i as u16 + 1)
            }
        })
        .collect()
}

/// Cosine similarity of two spectra. Undefined (error) for zero vectors.
pub fn cosine_similarity(a: &[f64], b: &[f64]) -> Result<f64> {
    assert_eq!(a.len(), b.len(), "spectra must have the same length");
    let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
    let na: f64 = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let nb: f64 = b.iter().map(|x| x * x).sum::<f64>().sqrt();
    if na == 0.0 || nb == 0.0 {
        return Err(Error::ZeroVector);
    }
    Ok(dot / (na * nb))
}

/// Discounts a similarity by the region's mean edge intensity:
/// `sim / (1 + e)`. The penalty is shared by every class for a given
/// region, so it reorders nothing within the region; it only expresses
/// how much the match is worth.
pub fn penalized_similarity(sim: f64, region_edge: f64) -> f64 {
    sim / (1.0 + region_edge)
}

/// Stage 1: majority labels where available, otherwise the prototype with
/// the highest penalized cosine similarity to the region mean (smaller
/// class id on exact ties).
///
/// Returns per-region labels and provenance.
pub fn match_unlabeled_regions(
    seg: &SuperpixelSegmentation,
    prototypes: &[ClassSpectralPrototype],
    edges: &RegionEdgeIntensity,
    majority: &[Option<u16>],
) -> Result<(Vec<u16>, Vec<Provenance>)> {
    assert_eq!(majority.len(), seg.num_regions());
    assert_eq!(edges.values.len(), seg.num_regions());
    assert!(!prototypes.is_empty(), "need at least one prototype");
    let mut labels = Vec::with_capacity(seg.num_regions());
    let mut provenance = Vec::with_capacity(seg.num_regions());
    for r in 0..seg.num_regions() {
        if let Some(label) = majority[r] {
            labels.push(label);
            provenance.push(Provenance::Majority);
            continue;
        }
        let mean = &seg.region_spectral_mean[r];
        let mut best_class = 0u16;
        let mut best_score = f64::NEG_INFINITY;
        for proto in prototypes {
            let sim = cosine_similarity(mean, &proto.mean_spectrum)?;
            let score = penalized_similarity(sim, edges.values[r]);
            // Strictly-greater keeps the first (smallest id) on ties.
            if score > best_score {
                best_score = score;
                best_class = proto.class_id;
            }
        }
        labels.push(best_class);
        provenance.push(Provenance::Similarity);
    }
    Ok((labels, provenance))
}

/// Stage 2: every similarity-labeled region is re-decided by an
/// edge-weighted vote over its neighbors' stage-1 labels.
///
/// Each neighbor `k` contributes `1 / (e_k + eps)` to its own label's
/// score; the synchronous pass reads only stage-1 labels. Regions with no
/// neighbors keep their label, as do vote ties that include the stage-1
/// label (other ties go to the smallest class id). Majority regions are
/// never revised.
pub fn neighbor_correct(
    stage1: &[u16],
    provenance: &[Provenance],
    adjacency: &[BTreeSet<u32>],
    edges: &RegionEdgeIntensity,
    eps: f64,
) -> Vec<u16> {
    assert_eq!(stage1.len(), provenance.len());
    assert_eq!(stage1.len(), adjacency.len());
    assert_eq!(stage1.len(), edges.values.len());
    let mut out = stage1.to_vec();
    for r in 0..stage1.len() {
        if provenance[r] != Provenance::Similarity {
            continue;
        }
        if adjacency[r].is_empty() {
            continue;
        }
        let mut votes: std::collections::BTreeMap<u16, f64> = Default::default();
        for &k in &adjacency[r] {
            let weight = 1.0 / (edges.values[k as usize] + eps);
            *votes.entry(stage1[k as usize]).or_insert(0.0) += weight;
        }
        let top = votes.values().copied().fold(f64::NEG_INFINITY, f64::max);
        let tied: Vec<u16> = votes
            .iter()
            .filter(|(_, &v)| v == top)
            .map(|(&c, _)| c)
            .collect();
        out[r] = if tied.contains(&stage1[r]) {
            stage1[r]
        } else {
            tied[0]
        };
    }
    out
}

/// Runs the whole pipeline: majority propagation, prototype matching,
/// neighbor correction, and pixel expansion.
pub fn propagate(
    cube: &HsiCube,
    seg: &SuperpixelSegmentation,
    labels: &LabelMap,
    edges: &RegionEdgeIntensity,
) -> Result<PseudoLabelState> {
    let prototypes = class_prototypes(cube, labels)?;
    let majority = majority_propagate(seg, labels);
    let (stage1, mut provenance) = match_unlabeled_regions(seg, &prototypes, edges, &majority)?;
    let stage2 = neighbor_correct(&stage1, &provenance, &seg.adjacency, edges, EDGE_EPSILON);
    for r in 0..stage1.len() {
        if stage2[r] != stage1[r] {
            provenance[r] = Provenance::Corrected;
        }
    }
    let pixel_pseudo_labels = expand_pixel_labels(&stage2, seg, labels);
    Ok(PseudoLabelState {
        stage1_region_labels: stage1,
        stage2_region_labels: stage2,
        pixel_pseudo_labels,
        provenance,
    })
}

/// Broadcasts region labels to pixels; pixels carrying a true label keep it.
pub fn expand_pixel_labels(
    stage2: &[u16],
    seg: &SuperpixelSegmentation,
    labels: &LabelMap,
) -> Vec<u16> {
    seg.assignment
        .iter()
        .enumerate()
        .map(|(p, &r)| {
            let truth = labels.labels()[p];
            if truth != 0 {
                truth
            } else {
                stage2[r as usize]
            }
        })
        .collect()
}

/// Draws up to `per_class` pseudo-labeled pixels per class, uniformly
/// without replacement, excluding truly labeled pixels.
///
/// Classes with no eligible pixel are listed in `skipped`. The draw is a
/// pure function of the rng state.
pub fn expand_and_sample(
    state: &PseudoLabelState,
    labels: &LabelMap,
    per_class: usize,
    rng: &mut SeededRng,
) -> BalancedSample {
    let mut all_classes: BTreeSet<u16> = state.stage2_region_labels.iter().copied().collect();
    all_classes.extend(labels.labels().iter().copied().filter(|&l| l != 0));
    let mut classes = Vec::new();
    let mut pixels_per_class = Vec::new();
    let mut skipped = Vec::new();
    for class in all_classes {
        let eligible: Vec<usize> = state
            .pixel_pseudo_labels
            .iter()
            .enumerate()
            .filter(|&(p, &l)| l == class && labels.labels()[p] == 0)
            .map(|(p, _)| p)
            .collect();
        if eligible.is_empty() {
            skipped.push(class);
            continue;
        }
        let picks = rng.sample_without_replacement(eligible.len(), per_class);
        let mut chosen: Vec<usize> = picks.into_iter().map(|i| eligible[i]).collect();
        chosen.sort_unstable();
        classes.push(class);
        pixels_per_class.push(chosen);
    }
    BalancedSample {
        classes,
        pixels_per_class,
        skipped,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::edgemap::RegionEdgeIntensity;

    /// Builds a segmentation directly from an assignment raster and a cube.
    fn seg_from(
        cube: &HsiCube,
        assignment: Vec<u32>,
    ) -> SuperpixelSegmentation {
        let (h, w) = (cube.height(), cube.width());
        let num_regions = assignment.iter().copied().max().unwrap() as usize + 1;
        let mut region_sizes = vec![0usize; num_regions];
        let mut sums = vec![vec![0.0f64; cube.bands()]; num_regions];
        for (p, &r) in assignment.iter().enumerate() {
            region_sizes[r as usize] += 1;
            for (s, &v) in sums[r as usize].iter_mut().zip(cube.spectrum_at(p)) {
                *s += v as f64;
            }
        }
        let region_spectral_mean = sums
            .iter()
            .zip(&region_sizes)
            .map(|(s, &n)| s.iter().map(|&x| x / n as f64).collect())
            .collect();
        let adjacency = crate::superpixel::region_adjacency(h, w, &assignment);
        SuperpixelSegmentation {
            height: h,
            width: w,
            assignment,
            region_sizes,
            region_spectral_mean,
            adjacency,
        }
    }

    /// 3-row cube of vertical stripes, one region per stripe, 3 bands.
    /// Stripe spectra are set per test; adjacency is the path 0-1-..-n.
    fn stripe_world(stripe_spectra: &[[f32; 3]]) -> (HsiCube, SuperpixelSegmentation) {
        let w = stripe_spectra.len();
        let mut data = Vec::new();
        for _y in 0..3 {
            for spectrum in stripe_spectra {
                data.extend_from_slice(spectrum);
            }
        }
        let cube = HsiCube::new(3, w, 3, data).unwrap();
        let assignment: Vec<u32> = (0..3 * w).map(|p| (p % w) as u32).collect();
        let seg = seg_from(&cube, assignment);
        (cube, seg)
    }

    #[test]
    fn cosine_similarity_hand_value() {
        let s = cosine_similarity(&[1.0, 0.0], &[1.0, 1.0]).unwrap();
        assert!((s - 0.70710678).abs() < 1e-8);
        assert!(matches!(
            cosine_similarity(&[0.0, 0.0], &[1.0, 0.0]),
            Err(Error::ZeroVector)
        ));
    }

    #[test]
    fn penalty_preserves_the_argmax_within_a_region() {
        let sims = [0.3, 0.9, 0.7];
        for e in [0.0, 0.4, 2.0] {
            let plain: Vec<f64> = sims.to_vec();
            let penalized: Vec<f64> = sims.iter().map(|&s| penalized_similarity(s, e)).collect();
            let argmax = |v: &[f64]| {
                v.iter()
                    .enumerate()
                    .max_by(|a, b| a.1.partial_cmp(b.1).unwrap())
                    .unwrap()
                    .0
            };
            assert_eq!(argmax(&plain), argmax(&penalized));
        }
        assert_eq!(penalized_similarity(0.8, 0.0), 0.8);
        assert!(penalized_similarity(0.8, 1.0) < 0.8);
    }

    #[test]
    fn majority_vote_breaks_ties_toward_the_smaller_class() {
        let (_, seg) = stripe_world(&[[1.0; 3]; 5]);
        // Stripe 0 owns pixels {0, 5, 10}: two class-2 votes, one class-1.
        let mut labels = vec![0u16; 15];
        labels[0] = 2;
        labels[5] = 1;
        labels[10] = 2;
        labels[1] = 1; // stripe 1 gets a single label
        let labels = LabelMap::new(3, 5, labels).unwrap();
        let majority = majority_propagate(&seg, &labels);
        assert_eq!(majority[0], Some(2));
        assert_eq!(majority[1], Some(1));
        assert_eq!(majority[2], None);

        // Now a genuine tie: one vote each for classes 1 and 2.
        let mut tied = vec![0u16; 15];
        tied[0] = 2;
        tied[5] = 1;
        let tied = LabelMap::new(3, 5, tied).unwrap();
        assert_eq!(majority_propagate(&seg, &tied)[0], Some(1));
    }

    #[test]
    fn identical_prototypes_all_match_class_one() {
        let (cube, seg) = stripe_world(&[[0.5, 0.5, 0.5]; 5]);
        let mut label_data = vec![0u16; 15];
        label_data[0] = 1;
        label_data[1] = 2;
        let labels = LabelMap::new(3, 5, label_data).unwrap();
        // Both prototypes equal the constant spectrum -> every similarity
        // ties -> smallest class id wins everywhere.
        let prototypes = class_prototypes(&cube, &labels).unwrap();
        assert_eq!(prototypes.len(), 2);
        let edges = RegionEdgeIntensity {
            values: vec![0.0; seg.num_regions()],
        };
        let majority = majority_propagate(&seg, &labels);
        let (stage1, prov) =
            match_unlabeled_regions(&seg, &prototypes, &edges, &majority).unwrap();
        for r in 2..5 {
            assert_eq!(stage1[r], 1, "region {r}");
            assert_eq!(prov[r], Provenance::Similarity);
        }
    }

    #[test]
    fn neighbor_vote_favors_smooth_neighbors() {
        // Hand-computed: neighbors with (label, edge) of (1, 0.1), (2, 0.9),
        // (1, 0.5) give class 1 a score ~12.0 and class 2 ~1.11.
        let stage1 = vec![2, 1, 2, 1, 2];
        let provenance = vec![
            Provenance::Similarity,
            Provenance::Majority,
            Provenance::Majority,
            Provenance::Majority,
            Provenance::Majority,
        ];
        let adjacency = vec![
            BTreeSet::from([1, 2, 3]),
            BTreeSet::from([0]),
            BTreeSet::from([0]),
            BTreeSet::from([0]),
            BTreeSet::new(),
        ];
        let edges = RegionEdgeIntensity {
            values: vec![0.0, 0.1, 0.9, 0.5, 0.0],
        };
        let corrected = neighbor_correct(&stage1, &provenance, &adjacency, &edges, EDGE_EPSILON);
        assert_eq!(corrected[0], 1);
        // Anchors and regions without neighbors are untouched.
        assert_eq!(&corrected[1..], &stage1[1..]);
    }

    #[test]
    fn vote_ties_keep_stage1_when_possible() {
        // Two neighbors with equal weights and labels {1, 2}; the region's
        // own stage-1 label 2 is among the tied classes and is kept.
        let stage1 = vec![2, 1, 2];
        let provenance = vec![
            Provenance::Similarity,
            Provenance::Majority,
            Provenance::Majority,
        ];
        let adjacency = vec![
            BTreeSet::from([1, 2]),
            BTreeSet::from([0]),
            BTreeSet::from([0]),
        ];
        let edges = RegionEdgeIntensity {
            values: vec![0.0, 0.3, 0.3],
        };
        let corrected = neighbor_correct(&stage1, &provenance, &adjacency, &edges, EDGE_EPSILON);
        assert_eq!(corrected[0], 2);

        // If the stage-1 label is not among the tied classes, smallest wins.
        let stage1 = vec![3, 1, 2];
        let corrected = neighbor_correct(&stage1, &provenance, &adjacency, &edges, EDGE_EPSILON);
        assert_eq!(corrected[0], 1);
    }

    #[test]
    fn schematic_pipeline_with_one_neighbor_revision() {
        // Six stripes: U1 L1 U2 L2 U3 L3. Prototypes are the spectral axes.
        // Stage 1: U1 matches class 2 (cos 0.990), U2 matches class 3
        // (cos 0.8 vs 0.6 for class 1), U3 matches class 1 (cos 0.995).
        // Stage 2 for U2: neighbors are L1 (class 2, edge 0.9) and L2
        // (class 1, edge 0.05), so the votes are ~1.11 vs ~20.0 and U2 is
        // overturned to class 1. U1 and U3 survive their votes.
        let spectra = [
            [0.1, 1.0, 0.1], // U1
            [0.0, 1.0, 0.0], // L1, labeled class 2
            [0.6, 0.0, 0.8], // U2
            [1.0, 0.0, 0.0], // L2, labeled class 1
            [1.0, 0.1, 0.0], // U3
            [0.0, 0.0, 1.0], // L3, labeled class 3
        ];
        let (cube, seg) = stripe_world(&spectra);
        let mut label_data = vec![0u16; 18];
        label_data[1] = 2; // stripe 1
        label_data[3] = 1; // stripe 3
        label_data[5] = 3; // stripe 5
        let labels = LabelMap::new(3, 6, label_data).unwrap();
        let edges = RegionEdgeIntensity {
            values: vec![0.2, 0.9, 0.3, 0.05, 0.2, 0.1],
        };

        let state = propagate(&cube, &seg, &labels, &edges).unwrap();
        assert_eq!(state.stage1_region_labels, vec![2, 2, 3, 1, 1, 3]);
        assert_eq!(state.stage2_region_labels, vec![2, 2, 1, 1, 1, 3]);
        assert_eq!(
            state.provenance,
            vec![
                Provenance::Similarity,
                Provenance::Majority,
                Provenance::Corrected,
                Provenance::Majority,
                Provenance::Similarity,
                Provenance::Majority,
            ]
        );
        // Pixel expansion: stripe 2's pixels take the corrected label, and
        // the three true labels survive verbatim.
        assert_eq!(state.pixel_pseudo_labels[2], 1);
        assert_eq!(state.pixel_pseudo_labels[1], 2);
        assert_eq!(state.pixel_pseudo_labels[5], 3);
    }

    #[test]
    fn pixel_expansion_keeps_true_labels() {
        let (_, seg) = stripe_world(&[[1.0, 0.0, 0.0]; 5]);
        let stage2 = vec![1, 1, 2, 2, 1];
        let mut label_data = vec![0u16; 15];
        label_data[2] = 3; // a true label disagreeing with its region
        let labels = LabelMap::new(3, 5, label_data).unwrap();
        let pixels = expand_pixel_labels(&stage2, &seg, &labels);
        assert_eq!(pixels[2], 3);
        assert_eq!(pixels[0], 1);
        assert_eq!(pixels[7], 2); // (1, 2) -> stripe 2
    }

    #[test]
    fn balanced_sample_is_capped_deterministic_and_excludes_true_labels() {
        let (_, seg) = stripe_world(&[[1.0, 0.0, 0.0]; 5]);
        let stage2 = vec![1, 1, 2, 2, 2];
        let mut label_data = vec![0u16; 15];
        label_data[0] = 1;
        label_data[7] = 2;
        let labels = LabelMap::new(3, 5, label_data).unwrap();
        let state = PseudoLabelState {
            stage1_region_labels: stage2.clone(),
            stage2_region_labels: stage2.clone(),
            pixel_pseudo_labels: expand_pixel_labels(&stage2, &seg, &labels),
            provenance: vec![Provenance::Similarity; 5],
        };
        let sample_a = expand_and_sample(&state, &labels, 4, &mut SeededRng::new(42));
        let sample_b = expand_and_sample(&state, &labels, 4, &mut SeededRng::new(42));
        assert_eq!(sample_a, sample_b);
        assert_eq!(sample_a.classes, vec![1, 2]);
        for (class, pixels) in sample_a.classes.iter().zip(&sample_a.pixels_per_class) {
            assert!(pixels.len() <= 4);
            for &p in pixels {
                assert_eq!(state.pixel_pseudo_labels[p], *class);
                assert_eq!(labels.labels()[p], 0, "true labels are excluded");
            }
        }
        // Class 1 has stripes 0 and 1 minus the labeled pixel 0: 5 eligible.
        assert_eq!(sample_a.pixels_per_class[0].len(), 4);
    }

    #[test]
    fn classes_without_pseudo_pixels_are_skipped() {
        let (_, seg) = stripe_world(&[[1.0, 0.0, 0.0]; 5]);
        let stage2 = vec![1, 1, 1, 1, 1];
        // Class 2 exists only as a true label; no pseudo pixel carries it.
        let mut label_data = vec![0u16; 15];
        label_data[3] = 2;
        let labels = LabelMap::new(3, 5, label_data).unwrap();
        let state = PseudoLabelState {
            stage1_region_labels: stage2.clone(),
            stage2_region_labels: stage2.clone(),
            pixel_pseudo_labels: expand_pixel_labels(&stage2, &seg, &labels),
            provenance: vec![Provenance::Similarity; 5],
        };
        let sample = expand_and_sample(&state, &labels, 3, &mut SeededRng::new(1));
        assert_eq!(sample.skipped, vec![2]);
        assert_eq!(sample.classes, vec![1]);
    }

    #[test]
    fn prototypes_require_labels_and_nonzero_spectra() {
        let (cube, _) = stripe_world(&[[0.0, 0.0, 0.0]; 5]);
        let empty = LabelMap::new(3, 5, vec![0; 15]).unwrap();
        assert!(matches!(
            class_prototypes(&cube, &empty),
            Err(Error::NoLabeledPixels)
        ));
        let mut label_data = vec![0u16; 15];
        label_data[0] = 1;
        let labels = LabelMap::new(3, 5, label_data).unwrap();
        assert!(matches!(
            class_prototypes(&cube, &labels),
            Err(Error::ZeroVector)
        ));
    }
}
