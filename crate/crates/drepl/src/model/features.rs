//! Fixed (non-learned) feature map from patches to classifier inputs.
//!
//! A patch becomes `B` band means plus a 3×3 grid of spatial cell means,
//! each cell mean projected onto the cube's leading `B_r = min(B, 8)`
//! spectral components — `B + 9·B_r` values total. The projection basis is
//! fitted once per cube and travels with checkpoints so saved models keep
//! their exact input space.

use crate::error::{Error, Result};
use crate::hsicore::{HsiCube, Patch};
use crate::projection::principal_basis;

/// Maximum number of projected spectral components per spatial cell.
pub const MAX_COMPONENTS: usize = 8;

/// Patch-to-feature-vector map with a frozen spectral basis.
#[derive(Debug, Clone, PartialEq)]
pub struct PatchFeaturizer {
    bands: usize,
    patch_size: usize,
    basis: Vec<Vec<f64>>,
}

impl PatchFeaturizer {
    /// Fits the spectral basis on a cube.
    pub fn fit(cube: &HsiCube, patch_size: usize) -> Self {
        let bands = cube.bands();
        let components = bands.min(MAX_COMPONENTS);
        PatchFeaturizer {
            bands,
            patch_size,
            basis: principal_basis(cube, components),
        }
    }

    /// Rebuilds a featurizer from stored parts (checkpoint loading).
    pub fn from_parts(bands: usize, patch_size: usize, basis: Vec<Vec<f64>>) -> Result<Self> {
        if bands == 0 || patch_size == 0 {
            return Err(Error::InvalidConfig(
                "featurizer needs positive bands and patch size".into(),
            ));
        }
        if basis.is_empty() || basis.len() > bands.min(MAX_COMPONENTS) {
            return Err(Error::InvalidConfig(format!(
                "basis with {} components is invalid for {} bands",
                basis.len(),
                bands
            )));
        }
        if basis.iter().any(|row| row.len() != bands) {
            return Err(Error::InvalidConfig(
                "every basis vector must have one weight per band".into(),
            ));
        }
        Ok(PatchFeaturizer {
            bands,
            patch_size,
            basis,
        })
    }

    pub fn bands(&self) -> usize {
        self.bands
    }

    pub fn patch_size(&self) -> usize {
        self.patch_size
    }

    pub fn basis(&self) -> &[Vec<f64>] {
        &self.basis
    }

    pub fn num_components(&self) -> usize {
        self.basis.len()
    }

    /// Length of the produced feature vectors: `B + 9·B_r`.
    pub fn input_dim(&self) -> usize {
        self.bands + 9 * self.basis.len()
    }

    /// Computes the feature vector of one patch.
    pub fn features(&self, patch: &Patch) -> Result<Vec<f64>> {
        if patch.size() != self.patch_size || patch.bands() != self.bands {
            return Err(Error::DimensionMismatch(format!(
                "patch is {0}x{0}x{1}, featurizer expects {2}x{2}x{3}",
                patch.size(),
                patch.bands(),
                self.patch_size,
                self.bands
            )));
        }
        let s = self.patch_size;
        let mut out = Vec::with_capacity(self.input_dim());

        // Whole-patch band means.
        let mut band_sums = vec![0.0f64; self.bands];
        for row in 0..s {
            for col in 0..s {
                for (sum, &v) in band_sums.iter_mut().zip(patch_spectrum(patch, row, col)) {
                    *sum += v as f64;
                }
            }
        }
        let pixels = (s * s) as f64;
        out.extend(band_sums.iter().map(|&v| v / pixels));

        // 3x3 spatial cells, each projected onto the basis. Degenerate
        // patch sizes (< 3) collapse cells onto shared pixels.
        for i in 0..3 {
            let (row_lo, row_hi) = cell_bounds(i, s);
            for j in 0..3 {
                let (col_lo, col_hi) = cell_bounds(j, s);
                let mut mean = vec![0.0f64; self.bands];
                let mut count = 0.0;
                for row in row_lo..row_hi {
                    for col in col_lo..col_hi {
                        for (m, &v) in mean.iter_mut().zip(patch_spectrum(patch, row, col)) {
                            *m += v as f64;
                        }
                        count += 1.0;
                    }
                }
                for m in &mut mean {
                    *m /= count;
                }
                for basis_row in &self.basis {
                    out.push(basis_row.iter().zip(&mean).map(|(b, m)| b * m).sum());
                }
            }
        }
        Ok(out)
    }
}

/// Row range of cell `i` in a 3-way split of `[0, size)`, never empty.
/// For sizes below 3 neighboring cells overlap rather than vanish.
fn cell_bounds(i: usize, size: usize) -> (usize, usize) {
    let lo = i * size / 3;
    let mut hi = (i + 1) * size / 3;
    if hi == lo {
        hi = lo + 1;
    }
    (lo, hi)
}

fn patch_spectrum(patch: &Patch, row: usize, col: usize) -> &[f32] {
    let start = (row * patch.size() + col) * patch.bands();
    &patch.values()[start..start + patch.bands()]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hsicore::extract_patch;

    /// Cube varying along one spectral direction so the leading basis
    /// vector is known exactly.
    fn rank_one_cube() -> HsiCube {
        let dir = [0.6f64, 0.0, -0.8];
        let mut data = Vec::new();
        for i in 0..25 {
            let t = (i as f64 / 24.0) * 2.0 - 1.0;
            for d in dir {
                data.push((1.0 + t * d) as f32);
            }
        }
        HsiCube::new(5, 5, 3, data).unwrap()
    }

    #[test]
    fn input_dimension_arithmetic() {
        let cube = rank_one_cube();
        let f = PatchFeaturizer::fit(&cube, 5);
        // 3 bands -> 3 components -> 3 + 9·3.
        assert_eq!(f.num_components(), 3);
        assert_eq!(f.input_dim(), 3 + 27);

        let wide = HsiCube::new(3, 3, 16, vec![0.5; 3 * 3 * 16]).unwrap();
        let f = PatchFeaturizer::fit(&wide, 3);
        assert_eq!(f.num_components(), 8);
        assert_eq!(f.input_dim(), 16 + 72);
    }

    #[test]
    fn cell_bounds_partition_common_sizes() {
        for size in [3usize, 4, 5, 7, 9, 24] {
            let mut last_hi = 0;
            for i in 0..3 {
                let (lo, hi) = cell_bounds(i, size);
                assert!(lo < hi && hi <= size);
                assert_eq!(lo, last_hi, "size {size}: cells tile without gaps");
                last_hi = hi;
            }
            assert_eq!(last_hi, size, "size {size} fully covered");
        }
        // Degenerate single-pixel patch: all cells share pixel 0.
        assert_eq!(cell_bounds(0, 1), (0, 1));
        assert_eq!(cell_bounds(2, 1), (0, 1));
    }

    #[test]
    fn size_three_cells_are_single_pixels() {
        let cube = rank_one_cube();
        let f = PatchFeaturizer::fit(&cube, 3);
        let patch = extract_patch(&cube, 2, 2, 3).unwrap();
        let features = f.features(&patch).unwrap();
        // Cell (i, j) of a 3x3 patch is exactly pixel (i, j); its projected
        // value is the dot product of that spectrum with each basis vector.
        for i in 0..3 {
            for j in 0..3 {
                for (c, basis_row) in f.basis().iter().enumerate() {
                    let want: f64 = basis_row
                        .iter()
                        .zip(patch_spectrum(&patch, i, j))
                        .map(|(b, &v)| b * v as f64)
                        .sum();
                    let got = features[3 + (i * 3 + j) * f.num_components() + c];
                    assert!((got - want).abs() < 1e-9);
                }
            }
        }
    }

    #[test]
    fn band_means_lead_the_vector() {
        let mut data = Vec::new();
        for _ in 0..9 {
            data.extend_from_slice(&[0.25f32, 0.75]);
        }
        let cube = HsiCube::new(3, 3, 2, data).unwrap();
        let f = PatchFeaturizer::fit(&cube, 3);
        let patch = extract_patch(&cube, 1, 1, 3).unwrap();
        let features = f.features(&patch).unwrap();
        assert!((features[0] - 0.25).abs() < 1e-9);
        assert!((features[1] - 0.75).abs() < 1e-9);
    }

    #[test]
    fn fitting_is_deterministic() {
        let cube = rank_one_cube();
        assert_eq!(PatchFeaturizer::fit(&cube, 5), PatchFeaturizer::fit(&cube, 5));
    }

    #[test]
    fn rejects_mismatched_patches_and_bad_parts() {
        let cube = rank_one_cube();
        let f = PatchFeaturizer::fit(&cube, 5);
        let small = extract_patch(&cube, 2, 2, 3).unwrap();
        assert!(matches!(
            f.features(&small),
            Err(Error::DimensionMismatch(_))
        ));

        assert!(PatchFeaturizer::from_parts(0, 5, vec![vec![1.0]]).is_err());
        assert!(PatchFeaturizer::from_parts(3, 5, vec![]).is_err());
        assert!(PatchFeaturizer::from_parts(3, 5, vec![vec![1.0, 0.0]]).is_err());
        let ok = PatchFeaturizer::from_parts(2, 5, vec![vec![1.0, 0.0]]).unwrap();
        assert_eq!(ok.input_dim(), 2 + 9);
    }
}
