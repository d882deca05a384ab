//! Compute the gradient-magnitude edge map of a scene and show that edges
//! concentrate on true class boundaries.
//!
//!     cargo run --example edge_maps

use drepl::edgemap::{normalize_edges, sobel_magnitude, spectral_mean_gray};
use drepl::hsicore::{generate_scene, normalize_cube, SceneSpec, SeededRng};

fn main() -> drepl::Result<()> {
    let spec = SceneSpec {
        height: 40,
        width: 72,
        bands: 12,
        num_classes: 4,
        region_granularity: 220.0,
        signature_separation: 0.5,
        noise_sigma: 0.05,
    };
    let (cube, truth) = generate_scene(&spec, &mut SeededRng::new(19))?;
    let norm = normalize_cube(&cube)?;

    let gray = spectral_mean_gray(&norm);
    let edges = normalize_edges(sobel_magnitude(&gray)?);

    // Split pixels into boundary (a 4-neighbor differs in class) and
    // interior, then compare their edge intensities.
    let (h, w) = (truth.height(), truth.width());
    let class_at = |y: usize, x: usize| truth.labels()[y * w + x];
    let mut boundary = Vec::new();
    let mut interior = Vec::new();
    for y in 0..h {
        for x in 0..w {
            let c = class_at(y, x);
            let is_boundary = (y > 0 && class_at(y - 1, x) != c)
                || (y + 1 < h && class_at(y + 1, x) != c)
                || (x > 0 && class_at(y, x - 1) != c)
                || (x + 1 < w && class_at(y, x + 1) != c);
            if is_boundary {
                boundary.push(edges.at(y, x));
            } else {
                interior.push(edges.at(y, x));
            }
        }
    }
    let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
    println!(
        "edge intensity: boundary pixels {:.3} vs interior pixels {:.3} ({} vs {} pixels)",
        mean(&boundary),
        mean(&interior),
        boundary.len(),
        interior.len()
    );

    // Coarse ASCII rendering, one character per 2x2 block.
    println!("\nedge map (darker = stronger):");
    let ramp = [' ', '.', ':', '+', '#'];
    for by in 0..h / 2 {
        let mut line = String::with_capacity(w / 2);
        for bx in 0..w / 2 {
            let mut m = 0.0f64;
            for dy in 0..2 {
                for dx in 0..2 {
                    m = m.max(edges.at(by * 2 + dy, bx * 2 + dx));
                }
            }
            let level = ((m * ramp.len() as f64) as usize).min(ramp.len() - 1);
            line.push(ramp[level]);
        }
        println!("  {line}");
    }
    Ok(())
}
