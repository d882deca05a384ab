//! Segment a scene into superpixels and look at how well the regions track
//! the ground truth: sizes, adjacency, and label purity.
//!
//!     cargo run --example superpixels

use drepl::hsicore::{generate_scene, normalize_cube, SceneSpec, SeededRng};
use drepl::superpixel::{slic_segment, target_region_count};

fn main() -> drepl::Result<()> {
    let spec = SceneSpec {
        height: 64,
        width: 64,
        bands: 16,
        num_classes: 5,
        region_granularity: 256.0,
        signature_separation: 0.4,
        noise_sigma: 0.1,
    };
    let root = SeededRng::new(7);
    let (cube, truth) = generate_scene(&spec, &mut root.derive(1))?;
    let norm = normalize_cube(&cube)?;

    let target = target_region_count(norm.height(), norm.width(), 50.0);
    let seg = slic_segment(&norm, target, 20.0, 10, &mut root.derive(2));

    println!(
        "requested ~{target} regions of ~50 pixels, got {} regions",
        seg.num_regions()
    );

    let mut sizes = seg.region_sizes.clone();
    sizes.sort_unstable();
    println!(
        "region sizes: min {}, median {}, max {}",
        sizes[0],
        sizes[sizes.len() / 2],
        sizes[sizes.len() - 1]
    );

    let degrees: Vec<usize> = seg.adjacency.iter().map(|n| n.len()).collect();
    println!(
        "neighbors per region: min {}, max {}, mean {:.1}",
        degrees.iter().min().unwrap(),
        degrees.iter().max().unwrap(),
        degrees.iter().sum::<usize>() as f64 / degrees.len() as f64
    );

    // Purity: how much of each region belongs to its dominant class. High
    // purity is what makes label propagation over regions work at all.
    let mut dominant = vec![0usize; seg.num_regions()];
    let mut purity_sum = 0.0;
    for r in 0..seg.num_regions() {
        let mut counts = vec![0usize; usize::from(spec.num_classes) + 1];
        for (p, &region) in seg.assignment.iter().enumerate() {
            if region as usize == r {
                counts[usize::from(truth.labels()[p])] += 1;
            }
        }
        let top = *counts.iter().max().unwrap();
        dominant[r] = top;
        purity_sum += top as f64 / seg.region_sizes[r] as f64;
    }
    let perfect = dominant
        .iter()
        .zip(&seg.region_sizes)
        .filter(|(&top, &size)| top == size)
        .count();
    println!(
        "label purity: mean {:.3}, single-class regions {}/{}",
        purity_sum / seg.num_regions() as f64,
        perfect,
        seg.num_regions()
    );
    Ok(())
}
