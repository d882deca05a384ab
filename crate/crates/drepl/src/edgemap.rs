//! Gradient-magnitude edge maps.
//!
//! The cube is first reduced to a single gray image by averaging over bands,
//! then filtered with the pair of 3x3 Sobel kernels
//!
//! ```text
//!      -1 0 +1           -1 -2 -1
//! Gx = -2 0 +2      Gy =  0  0  0
//!      -1 0 +1           +1 +2 +1
//! ```
//!
//! and combined as `sqrt(gx^2 + gy^2)`. Borders are mirror-extended (border
//! sample not repeated), matching patch extraction. The magnitude map is
//! min-max normalized to `[0, 1]`, and a per-region mean turns it into one
//! scalar edge intensity per superpixel.

use crate::error::{Error, Result};
use crate::hsicore::{reflect_index, HsiCube};
use crate::superpixel::SuperpixelSegmentation;

/// Single-channel image, row-major `f64`.
#[derive(Debug, Clone, PartialEq)]
pub struct GrayImage {
    pub height: usize,
    pub width: usize,
    pub values: Vec<f64>,
}

impl GrayImage {
    #[inline]
    pub fn at(&self, y: usize, x: usize) -> f64 {
        self.values[y * self.width + x]
    }
}

/// Gradient magnitude image produced by [`sobel_magnitude`].
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeMap {
    pub height: usize,
    pub width: usize,
    pub magnitude: Vec<f64>,
}

impl EdgeMap {
    #[inline]
    pub fn at(&self, y: usize, x: usize) -> f64 {
        self.magnitude[y * self.width + x]
    }
}

/// Mean edge intensity per region, indexed by region id.
#[derive(Debug, Clone, PartialEq)]
pub struct RegionEdgeIntensity {
    pub values: Vec<f64>,
}

/// Averages the cube over bands into one gray image.
pub fn spectral_mean_gray(cube: &HsiCube) -> GrayImage {
    let inv = 1.0 / cube.bands() as f64;
    let values = (0..cube.num_pixels())
        .map(|p| cube.spectrum_at(p).iter().map(|&v| v as f64).sum::<f64>() * inv)
        .collect();
    GrayImage {
        height: cube.height(),
        width: cube.width(),
        values,
    }
}

/// Applies the Sobel pair with mirrored borders and returns the magnitude.
pub fn sobel_magnitude(img: &GrayImage) -> Result<EdgeMap> {
    let (h, w) = (img.height, img.width);
    if h < 3 || w < 3 {
        return Err(Error::ImageTooSmall { height: h, width: w });
    }
    let mut magnitude = vec![0.0f64; h * w];
    for y in 0..h {
        let up = reflect_index(y as isize - 1, h);
        let down = reflect_index(y as isize + 1, h);
        for x in 0..w {
            let left = reflect_index(x as isize - 1, w);
            let right = reflect_index(x as isize + 1, w);
            // Each gradient is a difference of two identically-accumulated
            // 1-2-1 sums, so constant neighborhoods cancel exactly instead
            // of leaving one-ulp residue for the normalizer to amplify.
            let col = |cx: usize| img.at(up, cx) + 2.0 * img.at(y, cx) + img.at(down, cx);
            let row = |ry: usize| img.at(ry, left) + 2.0 * img.at(ry, x) + img.at(ry, right);
            let gx = col(right) - col(left);
            let gy = row(down) - row(up);
            magnitude[y * w + x] = (gx * gx + gy * gy).sqrt();
        }
    }
    Ok(EdgeMap {
        height: h,
        width: w,
        magnitude,
    })
}

/// Min-max rescales the magnitude into `[0, 1]`.
///
/// A flat map (max == min, e.g. a constant image) comes back as all zeros
/// rather than dividing by zero.
pub fn normalize_edges(map: EdgeMap) -> EdgeMap {
    let lo = map.magnitude.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = map.magnitude.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let magnitude = if hi > lo {
        map.magnitude.iter().map(|&v| (v - lo) / (hi - lo)).collect()
    } else {
        vec![0.0; map.magnitude.len()]
    };
    EdgeMap { magnitude, ..map }
}

/// Mean normalized edge magnitude over each region's pixels.
pub fn region_edge_intensity(
    map: &EdgeMap,
    seg: &SuperpixelSegmentation,
) -> Result<RegionEdgeIntensity> {
    if map.height != seg.height || map.width != seg.width {
        return Err(Error::DimensionMismatch(format!(
            "edge map is {}x{}, segmentation is {}x{}",
            map.height, map.width, seg.height, seg.width
        )));
    }
    let mut sums = vec![0.0f64; seg.num_regions()];
    for (p, &r) in seg.assignment.iter().enumerate() {
        sums[r as usize] += map.magnitude[p];
    }
    let values = sums
        .iter()
        .zip(&seg.region_sizes)
        .map(|(&s, &n)| s / n as f64)
        .collect();
    Ok(RegionEdgeIntensity { values })
}

/// Packs an edge map into a single-band cube so it can be written with the
/// standard raster writer.
pub fn edge_raster(map: &EdgeMap) -> Result<HsiCube> {
    HsiCube::new(
        map.height,
        map.width,
        1,
        map.magnitude.iter().map(|&v| v as f32).collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gray(h: usize, w: usize, f: impl Fn(usize, usize) -> f64) -> GrayImage {
        let mut values = Vec::with_capacity(h * w);
        for y in 0..h {
            for x in 0..w {
                values.push(f(y, x));
            }
        }
        GrayImage {
            height: h,
            width: w,
            values,
        }
    }

    #[test]
    fn gray_image_is_the_band_mean() {
        let cube = HsiCube::new(3, 3, 2, (0..18).map(|i| i as f32).collect()).unwrap();
        let g = spectral_mean_gray(&cube);
        // Pixel 0 has bands {0, 1} -> 0.5; pixel 8 has {16, 17} -> 16.5.
        assert_eq!(g.at(0, 0), 0.5);
        assert_eq!(g.at(2, 2), 16.5);
    }

    #[test]
    fn constant_image_has_zero_gradient_everywhere() {
        let img = gray(6, 7, |_, _| 3.25);
        let e = sobel_magnitude(&img).unwrap();
        assert!(e.magnitude.iter().all(|&m| m == 0.0));
    }

    #[test]
    fn vertical_unit_step_has_magnitude_four_on_both_adjoining_columns() {
        // Columns 0..=3 are 0, columns 4..=7 are 1.
        let img = gray(6, 8, |_, x| if x < 4 { 0.0 } else { 1.0 });
        let e = sobel_magnitude(&img).unwrap();
        for y in 1..5 {
            for x in 1..7 {
                let want = if x == 3 || x == 4 { 4.0 } else { 0.0 };
                assert_eq!(e.at(y, x), want, "at ({y}, {x})");
            }
        }
    }

    #[test]
    fn horizontal_step_mirrors_the_vertical_case() {
        let img = gray(8, 6, |y, _| if y < 4 { 0.0 } else { 1.0 });
        let e = sobel_magnitude(&img).unwrap();
        for y in 1..7 {
            for x in 1..5 {
                let want = if y == 3 || y == 4 { 4.0 } else { 0.0 };
                assert_eq!(e.at(y, x), want, "at ({y}, {x})");
            }
        }
    }

    #[test]
    fn tiny_images_are_rejected() {
        let img = gray(2, 5, |_, _| 0.0);
        assert!(matches!(
            sobel_magnitude(&img),
            Err(Error::ImageTooSmall { .. })
        ));
    }

    #[test]
    fn normalization_hits_zero_and_one() {
        let img = gray(5, 5, |y, x| ((y * 5 + x) % 3) as f64);
        let e = normalize_edges(sobel_magnitude(&img).unwrap());
        let lo = e.magnitude.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = e.magnitude.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        assert_eq!(lo, 0.0);
        assert_eq!(hi, 1.0);
    }

    #[test]
    fn flat_magnitude_normalizes_to_zero() {
        let e = normalize_edges(EdgeMap {
            height: 3,
            width: 3,
            magnitude: vec![2.0; 9],
        });
        assert!(e.magnitude.iter().all(|&v| v == 0.0));
    }
}
