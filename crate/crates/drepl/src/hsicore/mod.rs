//! Core data model: hyperspectral cubes, label maps, patches, and the
//! deterministic RNG and file formats shared by the rest of the crate.
//!
//! A cube is stored as one flat `f32` buffer in `(y, x, band)` order, so a
//! pixel's spectrum is contiguous. Label maps use `u16` class ids where `0`
//! means "unlabeled" and classes run `1..=K`.

pub mod io;
pub mod rng;
pub mod scene;

use crate::error::{Error, Result};

pub use io::{read_cube, read_labels, write_cube, write_labels};
pub use rng::SeededRng;
pub use scene::{generate_scene, SceneSpec};

/// A hyperspectral image: `height * width` pixels with `bands` channels each.
///
/// Data is row-major `(y, x, band)`. Both spatial sides must be at least 3 so
/// the 3x3 neighborhood operations downstream are always defined.
#[derive(Debug, Clone, PartialEq)]
pub struct HsiCube {
    height: usize,
    width: usize,
    bands: usize,
    data: Vec<f32>,
}

impl HsiCube {
    /// Wraps a flat `(y, x, band)` buffer, checking dimensions.
    pub fn new(height: usize, width: usize, bands: usize, data: Vec<f32>) -> Result<Self> {
        if height < 3 || width < 3 {
            return Err(Error::CubeTooSmall { height, width });
        }
        if bands == 0 {
            return Err(Error::InvalidConfig("a cube needs at least one band".into()));
        }
        let expected = height * width * bands;
        if data.len() != expected {
            return Err(Error::LengthMismatch {
                expected,
                got: data.len(),
                context: "cube payload",
            });
        }
        Ok(HsiCube {
            height,
            width,
            bands,
            data,
        })
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn bands(&self) -> usize {
        self.bands
    }

    /// Number of pixels, `height * width`.
    pub fn num_pixels(&self) -> usize {
        self.height * self.width
    }

    /// The flat `(y, x, band)` buffer.
    pub fn data(&self) -> &[f32] {
        &self.data
    }

    /// Value at `(y, x, band)`.
    #[inline]
    pub fn at(&self, y: usize, x: usize, band: usize) -> f32 {
        self.data[(y * self.width + x) * self.bands + band]
    }

    /// The spectrum of pixel `(y, x)` as a contiguous slice.
    #[inline]
    pub fn spectrum(&self, y: usize, x: usize) -> &[f32] {
        let start = (y * self.width + x) * self.bands;
        &self.data[start..start + self.bands]
    }

    /// Spectrum by flat pixel index (`y * width + x`).
    #[inline]
    pub fn spectrum_at(&self, pixel: usize) -> &[f32] {
        let start = pixel * self.bands;
        &self.data[start..start + self.bands]
    }
}

/// A per-pixel class map aligned with a cube. `0` means unlabeled.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelMap {
    height: usize,
    width: usize,
    labels: Vec<u16>,
}

impl LabelMap {
    /// Wraps a flat row-major label buffer, checking dimensions.
    pub fn new(height: usize, width: usize, labels: Vec<u16>) -> Result<Self> {
        let expected = height * width;
        if labels.len() != expected {
            return Err(Error::LengthMismatch {
                expected,
                got: labels.len(),
                context: "label payload",
            });
        }
        Ok(LabelMap {
            height,
            width,
            labels,
        })
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn labels(&self) -> &[u16] {
        &self.labels
    }

    /// Label at `(y, x)`; `0` means unlabeled.
    #[inline]
    pub fn at(&self, y: usize, x: usize) -> u16 {
        self.labels[y * self.width + x]
    }

    /// Largest class id present; classes are `1..=num_classes()`.
    pub fn num_classes(&self) -> u16 {
        self.labels.iter().copied().max().unwrap_or(0)
    }

    /// Flat pixel indices carrying each class, ordered by class then index.
    pub fn labeled_pixels(&self) -> Vec<(usize, u16)> {
        let mut out: Vec<(usize, u16)> = self
            .labels
            .iter()
            .enumerate()
            .filter(|(_, &l)| l != 0)
            .map(|(i, &l)| (i, l))
            .collect();
        out.sort_by_key(|&(i, l)| (l, i));
        out
    }
}

/// A square spatial window around a pixel with all bands, mirror-padded at
/// image borders. Values are `(row, col, band)` row-major, like the cube.
#[derive(Debug, Clone, PartialEq)]
pub struct Patch {
    size: usize,
    bands: usize,
    values: Vec<f32>,
}

impl Patch {
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn bands(&self) -> usize {
        self.bands
    }

    pub fn values(&self) -> &[f32] {
        &self.values
    }

    #[inline]
    pub fn at(&self, row: usize, col: usize, band: usize) -> f32 {
        self.values[(row * self.size + col) * self.bands + band]
    }

    pub(crate) fn from_parts(size: usize, bands: usize, values: Vec<f32>) -> Self {
        debug_assert_eq!(values.len(), size * size * bands);
        Patch { size, bands, values }
    }
}

/// Reflects an out-of-range index back into `[0, n)` without repeating the
/// border sample (`-1` maps to `1`, `n` maps to `n - 2`).
pub(crate) fn reflect_index(idx: isize, n: usize) -> usize {
    debug_assert!(n > 0);
    if n == 1 {
        return 0;
    }
    let period = 2 * (n as isize - 1);
    let mut i = idx % period;
    if i < 0 {
        i += period;
    }
    if i >= n as isize {
        i = period - i;
    }
    i as usize
}

/// Rescales every value linearly so the global minimum maps to 0 and the
/// global maximum to 1.
///
/// Non-finite values are ignored when locating the extremes. Fails with
/// [`Error::ConstantCube`] when max does not exceed min. Applying it twice is
/// exact: the second pass divides by `1 - 0` and subtracts `0`.
pub fn normalize_cube(cube: &HsiCube) -> Result<HsiCube> {
    let mut lo = f32::INFINITY;
    let mut hi = f32::NEG_INFINITY;
    for &v in &cube.data {
        if v.is_finite() {
            lo = lo.min(v);
            hi = hi.max(v);
        }
    }
    if !(hi > lo) {
        return Err(Error::ConstantCube);
    }
    let span = (hi - lo) as f64;
    let lo = lo as f64;
    let data = cube
        .data
        .iter()
        .map(|&v| ((v as f64 - lo) / span) as f32)
        .collect();
    Ok(HsiCube {
        height: cube.height,
        width: cube.width,
        bands: cube.bands,
        data,
    })
}

/// Extracts a `size x size x bands` window centered on `(row, col)`.
///
/// Off-image coordinates are mirrored (border row/column not repeated), so
/// patches near the edge stay full-size without inventing zero reflectance.
/// For even sizes the window extends one pixel further down/right than up/left.
pub fn extract_patch(cube: &HsiCube, row: usize, col: usize, size: usize) -> Result<Patch> {
    assert!(size >= 1, "patch size must be at least 1");
    if row >= cube.height || col >= cube.width {
        return Err(Error::BadCenter {
            row,
            col,
            height: cube.height,
            width: cube.width,
        });
    }
    let half = (size as isize - 1) / 2;
    let mut values = Vec::with_capacity(size * size * cube.bands);
    for dr in 0..size as isize {
        let y = reflect_index(row as isize - half + dr, cube.height);
        for dc in 0..size as isize {
            let x = reflect_index(col as isize - half + dc, cube.width);
            values.extend_from_slice(cube.spectrum(y, x));
        }
    }
    Ok(Patch::from_parts(size, cube.bands, values))
}
