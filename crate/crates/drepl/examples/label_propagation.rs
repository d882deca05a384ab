//! Propagate a handful of labeled pixels across superpixel regions and
//! measure the result against the full ground truth: majority regions,
//! similarity-matched regions, neighbor corrections, and the balanced
//! pseudo-label pool that training consumes.
//!
//!     cargo run --example label_propagation

use drepl::easlp;
use drepl::edgemap::{normalize_edges, region_edge_intensity, sobel_magnitude, spectral_mean_gray};
use drepl::hsicore::{generate_scene, normalize_cube, LabelMap, SceneSpec, SeededRng};
use drepl::superpixel::{slic_segment, target_region_count};
use drepl::trainer::split_train_test;

fn main() -> drepl::Result<()> {
    let spec = SceneSpec {
        height: 64,
        width: 64,
        bands: 16,
        num_classes: 5,
        region_granularity: 820.0,
        signature_separation: 0.1,
        noise_sigma: 0.1,
    };
    let root = SeededRng::new(3);
    let (cube, truth) = generate_scene(&spec, &mut root.derive(1))?;
    let norm = normalize_cube(&cube)?;

    // Ten labeled pixels per class; everything else is unknown to the
    // propagation.
    let (train_pixels, _) = split_train_test(&truth, 10, &mut root.derive(2))?;
    let mut sparse = vec![0u16; norm.num_pixels()];
    for &(p, c) in &train_pixels {
        sparse[p] = c;
    }
    let train_map = LabelMap::new(norm.height(), norm.width(), sparse)?;
    println!(
        "{} labeled pixels over {} total ({:.2}%)",
        train_pixels.len(),
        norm.num_pixels(),
        100.0 * train_pixels.len() as f64 / norm.num_pixels() as f64
    );

    let target = target_region_count(norm.height(), norm.width(), 50.0);
    let seg = slic_segment(&norm, target, 20.0, 10, &mut root.derive(3));
    let edges = normalize_edges(sobel_magnitude(&spectral_mean_gray(&norm))?);
    let region_edges = region_edge_intensity(&edges, &seg)?;

    let state = easlp::propagate(&norm, &seg, &train_map, &region_edges)?;

    let by = |wanted: easlp::Provenance| state.provenance.iter().filter(|&&p| p == wanted).count();
    println!("\nregions: {} total", seg.num_regions());
    println!("  labeled by majority vote:        {}", by(easlp::Provenance::Majority));
    println!("  labeled by spectral similarity:  {}", by(easlp::Provenance::Similarity));
    println!("  revised by the neighbor vote:    {}", by(easlp::Provenance::Corrected));

    let accuracy = |pseudo: &[u16]| {
        let hits = truth
            .labels()
            .iter()
            .zip(pseudo)
            .filter(|(&t, &p)| t != 0 && p == t)
            .count();
        hits as f64 / truth.labels().iter().filter(|&&t| t != 0).count() as f64
    };
    let stage1 = easlp::expand_pixel_labels(&state.stage1_region_labels, &seg, &train_map);
    println!("\npseudo-label accuracy:");
    println!("  after similarity matching: {:.4}", accuracy(&stage1));
    println!("  after neighbor correction: {:.4}", accuracy(&state.pixel_pseudo_labels));

    let pool = easlp::expand_and_sample(&state, &train_map, 200, &mut root.derive(4));
    println!("\nbalanced pool (up to 200 per class):");
    for (c, pixels) in pool.classes.iter().zip(&pool.pixels_per_class) {
        println!("  class {c}: {} pixels", pixels.len());
    }
    if !pool.skipped.is_empty() {
        println!("  skipped classes (no pseudo-labels): {:?}", pool.skipped);
    }
    Ok(())
}
