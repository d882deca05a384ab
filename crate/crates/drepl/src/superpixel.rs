//! SLIC-style superpixel segmentation.
//!
//! Pixels are clustered by a weighted distance combining spectral similarity
//! with spatial proximity. The spectral part lives in a 3-component internal
//! projection of the bands (rescaled so the dominant component spans ~100
//! units, which puts the default compactness of 10 in its usual regime); the
//! spatial part is scaled by `compactness / S` where `S = sqrt(H*W / M)` is
//! the expected superpixel side. After a fixed number of assignment/update
//! rounds, a connectivity pass merges stray fragments into their largest
//! already-labeled neighbor so every region is one 4-connected component.
//!
//! Determinism: centers start on a regular grid with a small seeded jitter,
//! candidate regions are scanned in increasing id order with strict-less
//! comparisons (lower id wins distance ties), and the cleanup scans pixels
//! row-major. Same cube, seed, and parameters give the same assignment.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::hsicore::{HsiCube, LabelMap, SeededRng};
use crate::projection;

/// A completed segmentation: per-pixel region ids plus per-region summaries.
#[derive(Debug, Clone)]
pub struct SuperpixelSegmentation {
    pub height: usize,
    pub width: usize,
    /// Region id per pixel, row-major; ids are compact `0..num_regions()`.
    pub assignment: Vec<u32>,
    /// Pixel count per region; every region is non-empty.
    pub region_sizes: Vec<usize>,
    /// Mean full-band spectrum per region.
    pub region_spectral_mean: Vec<Vec<f64>>,
    /// 4-connectivity neighbors per region; symmetric, no self-edges.
    pub adjacency: Vec<BTreeSet<u32>>,
}

impl SuperpixelSegmentation {
    pub fn num_regions(&self) -> usize {
        self.region_sizes.len()
    }

    /// Region ids as a label raster (stored as `id + 1`, since label rasters
    /// reserve 0 for "unlabeled"). Fails if there are 65535 or more regions.
    pub fn region_raster(&self) -> Result<LabelMap> {
        if self.num_regions() >= usize::from(u16::MAX) {
            return Err(Error::InvalidConfig(format!(
                "{} regions do not fit a u16 raster",
                self.num_regions()
            )));
        }
        LabelMap::new(
            self.height,
            self.width,
            self.assignment.iter().map(|&r| r as u16 + 1).collect(),
        )
    }
}

/// Number of superpixels for an image of `height * width` pixels when each
/// should hold about `pixels_per_region` of them: `round(H*W / eps)`, at
/// least 1.
pub fn target_region_count(height: usize, width: usize, pixels_per_region: f64) -> usize {
    assert!(pixels_per_region > 0.0, "pixels_per_region must be positive");
    (((height * width) as f64 / pixels_per_region).round() as usize).max(1)
}

/// Builds the symmetric 4-connectivity adjacency between regions of a
/// row-major assignment raster.
pub fn region_adjacency(height: usize, width: usize, assignment: &[u32]) -> Vec<BTreeSet<u32>> {
    let num_regions = assignment.iter().copied().max().map_or(0, |m| m as usize + 1);
    let mut adjacency = vec![BTreeSet::new(); num_regions];
    for y in 0..height {
        for x in 0..width {
            let a = assignment[y * width + x];
            if x + 1 < width {
                let b = assignment[y * width + x + 1];
                if a != b {
                    adjacency[a as usize].insert(b);
                    adjacency[b as usize].insert(a);
                }
            }
            if y + 1 < height {
                let b = assignment[(y + 1) * width + x];
                if a != b {
                    adjacency[a as usize].insert(b);
                    adjacency[b as usize].insert(a);
                }
            }
        }
    }
    adjacency
}

struct Center {
    y: f64,
    x: f64,
    feat: Vec<f64>,
}

/// Segments `cube` into at most `m_regions` superpixels.
///
/// `compactness` trades spatial regularity against spectral coherence
/// (10 is a sensible default) and `iterations` is the number of
/// assignment/update rounds (10 is standard). The `rng` only jitters the
/// initial grid centers by up to an eighth of a superpixel side.
pub fn slic_segment(
    cube: &HsiCube,
    m_regions: usize,
    compactness: f64,
    iterations: usize,
    rng: &mut SeededRng,
) -> SuperpixelSegmentation {
    assert!(m_regions >= 1, "need at least one region");
    assert!(compactness > 0.0, "compactness must be positive");
    let (h, w) = (cube.height(), cube.width());
    let n = h * w;
    let m = m_regions.min(n);
    let s = ((n as f64) / m as f64).sqrt();

    // Spectral features: 3-component projection, rescaled so the widest
    // component spans 100 units. A constant cube projects to all zeros and
    // the spatial term alone decides.
    let basis = projection::principal_basis(cube, 3.min(cube.bands()));
    let mut feats: Vec<f64> = Vec::with_capacity(n * 3);
    for p in 0..n {
        feats.extend(projection::project(&basis, cube.spectrum_at(p)));
    }
    let dims = basis.len();
    let mut span = 0.0f64;
    for d in 0..dims {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for p in 0..n {
            let v = feats[p * dims + d];
            lo = lo.min(v);
            hi = hi.max(v);
        }
        span = span.max(hi - lo);
    }
    if span > 0.0 {
        let scale = 100.0 / span;
        for f in &mut feats {
            *f *= scale;
        }
    }

    // Grid initialization with a small seeded jitter. The grid is sized from
    // the region count itself (aspect-balanced) so it always has at least
    // `m` cells; deriving it from the spacing can round a dimension down and
    // silently produce fewer centers than asked for.
    let mut nx = ((m as f64 * w as f64 / h as f64).sqrt().ceil() as usize).clamp(1, w);
    let mut ny = m.div_ceil(nx).clamp(1, h);
    while nx * ny < m {
        if nx < w {
            nx += 1;
        } else {
            ny += 1;
        }
    }
    let mut centers: Vec<Center> = Vec::with_capacity(ny * nx);
    for gy in 0..ny {
        for gx in 0..nx {
            if centers.len() == m {
                break;
            }
            let jy = (rng.next_f64() - 0.5) * s / 4.0;
            let jx = (rng.next_f64() - 0.5) * s / 4.0;
            let cy = ((gy as f64 + 0.5) * h as f64 / ny as f64 - 0.5 + jy)
                .clamp(0.0, h as f64 - 1.0);
            let cx = ((gx as f64 + 0.5) * w as f64 / nx as f64 - 0.5 + jx)
                .clamp(0.0, w as f64 - 1.0);
            let (py, px) = (cy.round() as usize, cx.round() as usize);
            centers.push(Center {
                y: cy,
                x: cx,
                feat: feats[(py * w + px) * dims..(py * w + px) * dims + dims].to_vec(),
            });
        }
    }

    // Initial assignment: spatially nearest center, lower id on ties, so
    // every pixel starts covered even if a center's window misses it later.
    let mut assignment: Vec<u32> = vec![0; n];
    for y in 0..h {
        for x in 0..w {
            let mut best = 0u32;
            let mut best_d = f64::INFINITY;
            for (i, c) in centers.iter().enumerate() {
                let d = (c.y - y as f64).powi(2) + (c.x - x as f64).powi(2);
                if d < best_d {
                    best_d = d;
                    best = i as u32;
                }
            }
            assignment[y * w + x] = best;
        }
    }

    let spatial_weight = (compactness / s) * (compactness / s);
    let window = (2.0 * s).ceil() as isize;
    let mut best_dist = vec![f64::INFINITY; n];
    for _ in 0..iterations {
        best_dist.fill(f64::INFINITY);
        for (i, c) in centers.iter().enumerate() {
            let y0 = ((c.y as isize) - window).max(0) as usize;
            let y1 = (((c.y as isize) + window) as usize).min(h - 1);
            let x0 = ((c.x as isize) - window).max(0) as usize;
            let x1 = (((c.x as isize) + window) as usize).min(w - 1);
            for y in y0..=y1 {
                for x in x0..=x1 {
                    let p = y * w + x;
                    let mut spectral = 0.0;
                    for d in 0..dims {
                        let diff = feats[p * dims + d] - c.feat[d];
                        spectral += diff * diff;
                    }
                    let spatial = (c.y - y as f64).powi(2) + (c.x - x as f64).powi(2);
                    let dist = spectral + spatial_weight * spatial;
                    if dist < best_dist[p] {
                        best_dist[p] = dist;
                        assignment[p] = i as u32;
                    }
                }
            }
        }
        // Update step: move each center to the mean of its members.
        let mut counts = vec![0usize; centers.len()];
        let mut sum_y = vec![0.0f64; centers.len()];
        let mut sum_x = vec![0.0f64; centers.len()];
        let mut sum_f = vec![0.0f64; centers.len() * dims];
        for y in 0..h {
            for x in 0..w {
                let p = y * w + x;
                let i = assignment[p] as usize;
                counts[i] += 1;
                sum_y[i] += y as f64;
                sum_x[i] += x as f64;
                for d in 0..dims {
                    sum_f[i * dims + d] += feats[p * dims + d];
                }
            }
        }
        for (i, c) in centers.iter_mut().enumerate() {
            if counts[i] == 0 {
                continue;
            }
            let inv = 1.0 / counts[i] as f64;
            c.y = sum_y[i] * inv;
            c.x = sum_x[i] * inv;
            for d in 0..dims {
                c.feat[d] = sum_f[i * dims + d] * inv;
            }
        }
    }

    let assignment = enforce_connectivity(&assignment, h, w, s);
    finalize(cube, assignment)
}

/// Relabels the raw assignment so every output region is one 4-connected
/// component. The largest fragment of each id (of size at least `S^2 / 4`)
/// anchors the region; every other fragment is absorbed by its largest
/// adjacent surviving region.
fn enforce_connectivity(assignment: &[u32], h: usize, w: usize, s: f64) -> Vec<u32> {
    let n = h * w;
    let min_size = ((s * s / 4.0) as usize).max(1);

    // Find 4-connected components of the raw assignment. Flood fills start
    // at the smallest unvisited pixel index, so component ids are ordered by
    // their first pixel in scan order.
    let mut comp_id = vec![usize::MAX; n];
    let mut comp_sizes: Vec<usize> = Vec::new();
    let mut comp_region: Vec<u32> = Vec::new();
    let mut comp_pixels: Vec<Vec<usize>> = Vec::new();
    for start in 0..n {
        if comp_id[start] != usize::MAX {
            continue;
        }
        let cid = comp_sizes.len();
        let region = assignment[start];
        let mut stack = vec![start];
        comp_id[start] = cid;
        let mut pixels = Vec::new();
        while let Some(p) = stack.pop() {
            pixels.push(p);
            let (y, x) = (p / w, p % w);
            for q in neighbors4(y, x, h, w) {
                if comp_id[q] == usize::MAX && assignment[q] == region {
                    comp_id[q] = cid;
                    stack.push(q);
                }
            }
        }
        comp_sizes.push(pixels.len());
        comp_region.push(region);
        comp_pixels.push(pixels);
    }

    // The anchor of a region id is its largest component (earliest in scan
    // order on ties). Anchors below the size threshold are dropped, which
    // removes sliver regions entirely; if that would drop everything, the
    // globally largest component survives so at least one region remains.
    let mut anchor_of_region: std::collections::BTreeMap<u32, usize> = Default::default();
    for cid in 0..comp_sizes.len() {
        let e = anchor_of_region.entry(comp_region[cid]).or_insert(cid);
        if comp_sizes[*e] < comp_sizes[cid] {
            *e = cid;
        }
    }
    let mut kept: Vec<usize> = anchor_of_region
        .values()
        .copied()
        .filter(|&cid| comp_sizes[cid] >= min_size)
        .collect();
    if kept.is_empty() {
        let best = (0..comp_sizes.len())
            .max_by_key(|&cid| (comp_sizes[cid], std::cmp::Reverse(cid)))
            .expect("image has at least one pixel");
        kept.push(best);
    }
    kept.sort_unstable();

    let mut out = vec![u32::MAX; n];
    let mut out_sizes: Vec<usize> = Vec::with_capacity(kept.len());
    for (new_id, &cid) in kept.iter().enumerate() {
        for &p in &comp_pixels[cid] {
            out[p] = new_id as u32;
        }
        out_sizes.push(comp_sizes[cid]);
    }

    // Absorb the remaining fragments. Each pass merges every fragment that
    // already touches labeled territory into its largest labeled neighbor
    // (smaller id on ties); the labeled area only grows, so this terminates.
    let mut pending: Vec<usize> = (0..comp_sizes.len()).filter(|c| !kept.contains(c)).collect();
    while !pending.is_empty() {
        let mut still_pending = Vec::new();
        let mut progressed = false;
        for &cid in &pending {
            let mut neighbor_ids: BTreeSet<u32> = BTreeSet::new();
            for &p in &comp_pixels[cid] {
                let (y, x) = (p / w, p % w);
                for q in neighbors4(y, x, h, w) {
                    if out[q] != u32::MAX {
                        neighbor_ids.insert(out[q]);
                    }
                }
            }
            match neighbor_ids
                .into_iter()
                .max_by_key(|&r| (out_sizes[r as usize], std::cmp::Reverse(r)))
            {
                Some(r) => {
                    for &p in &comp_pixels[cid] {
                        out[p] = r;
                    }
                    out_sizes[r as usize] += comp_sizes[cid];
                    progressed = true;
                }
                None => still_pending.push(cid),
            }
        }
        assert!(progressed, "fragment merging must make progress");
        pending = still_pending;
    }
    out
}

fn neighbors4(y: usize, x: usize, h: usize, w: usize) -> impl Iterator<Item = usize> {
    let mut out = [usize::MAX; 4];
    let mut k = 0;
    if y > 0 {
        out[k] = (y - 1) * w + x;
        k += 1;
    }
    if y + 1 < h {
        out[k] = (y + 1) * w + x;
        k += 1;
    }
    if x > 0 {
        out[k] = y * w + x - 1;
        k += 1;
    }
    if x + 1 < w {
        out[k] = y * w + x + 1;
        k += 1;
    }
    out.into_iter().take(k)
}

fn finalize(cube: &HsiCube, assignment: Vec<u32>) -> SuperpixelSegmentation {
    let (h, w) = (cube.height(), cube.width());
    let num_regions = assignment.iter().copied().max().map_or(0, |m| m as usize + 1);
    let bands = cube.bands();
    let mut region_sizes = vec![0usize; num_regions];
    let mut sums = vec![0.0f64; num_regions * bands];
    for (p, &r) in assignment.iter().enumerate() {
        region_sizes[r as usize] += 1;
        let spectrum = cube.spectrum_at(p);
        let row = &mut sums[r as usize * bands..(r as usize + 1) * bands];
        for (acc, &v) in row.iter_mut().zip(spectrum) {
            *acc += v as f64;
        }
    }
    let region_spectral_mean = (0..num_regions)
        .map(|r| {
            let inv = 1.0 / region_sizes[r] as f64;
            sums[r * bands..(r + 1) * bands]
                .iter()
                .map(|&s| s * inv)
                .collect()
        })
        .collect();
    let adjacency = region_adjacency(h, w, &assignment);
    SuperpixelSegmentation {
        height: h,
        width: w,
        assignment,
        region_sizes,
        region_spectral_mean,
        adjacency,
    }
}
