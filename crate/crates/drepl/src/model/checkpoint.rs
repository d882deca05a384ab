//! Model checkpoints: a flat little-endian `f32` parameter file plus a
//! `<path>.json` manifest carrying shapes, the featurizer basis, the epoch,
//! and the seed. A checkpoint is self-contained: loading one rebuilds both
//! the classifier and its exact input features.

use super::{Mlp, PatchFeaturizer};
use crate::error::{Error, Result};
use crate::hsicore::io::sidecar_path;
use serde::{Deserialize, Serialize};
use std::fs;
use std::path::Path;

#[derive(Debug, Serialize, Deserialize)]
struct Manifest {
    input_dim: usize,
    hidden_dim: usize,
    num_classes: usize,
    patch_size: usize,
    bands: usize,
    basis: Vec<Vec<f64>>,
    epoch: usize,
    seed: u64,
}

/// A loaded checkpoint.
#[derive(Debug, Clone)]
pub struct Checkpoint {
    pub model: Mlp,
    pub featurizer: PatchFeaturizer,
    pub epoch: usize,
    pub seed: u64,
}

/// Writes `<path>` (parameters as `f32`, order `w1 b1 w2 b2`) and
/// `<path>.json` (the manifest).
pub fn save_checkpoint(
    path: &Path,
    model: &Mlp,
    featurizer: &PatchFeaturizer,
    epoch: usize,
    seed: u64,
) -> Result<()> {
    if model.input_dim != featurizer.input_dim() {
        return Err(Error::DimensionMismatch(format!(
            "model expects {} inputs but the featurizer produces {}",
            model.input_dim,
            featurizer.input_dim()
        )));
    }
    let manifest = Manifest {
        input_dim: model.input_dim,
        hidden_dim: model.hidden_dim,
        num_classes: model.num_classes,
        patch_size: featurizer.patch_size(),
        bands: featurizer.bands(),
        basis: featurizer.basis().to_vec(),
        epoch,
        seed,
    };
    fs::write(sidecar_path(path), serde_json::to_vec_pretty(&manifest)?)?;
    let mut bytes = Vec::new();
    for tensor in [&model.w1, &model.b1, &model.w2, &model.b2] {
        for &v in tensor {
            bytes.extend_from_slice(&(v as f32).to_le_bytes());
        }
    }
    fs::write(path, bytes)?;
    Ok(())
}

/// Reads a checkpoint written by [`save_checkpoint`].
pub fn load_checkpoint(path: &Path) -> Result<Checkpoint> {
    let manifest: Manifest = serde_json::from_slice(&fs::read(sidecar_path(path))?)?;
    let featurizer =
        PatchFeaturizer::from_parts(manifest.bands, manifest.patch_size, manifest.basis)?;
    if featurizer.input_dim() != manifest.input_dim {
        return Err(Error::BadCheckpoint(format!(
            "manifest claims {} inputs but its basis implies {}",
            manifest.input_dim,
            featurizer.input_dim()
        )));
    }
    let mut model = Mlp::zeros(manifest.input_dim, manifest.hidden_dim, manifest.num_classes)?;
    let bytes = fs::read(path)?;
    let expected =
        4 * (model.w1.len() + model.b1.len() + model.w2.len() + model.b2.len());
    if bytes.len() != expected {
        return Err(Error::BadCheckpoint(format!(
            "parameter file holds {} bytes, manifest shapes need {}",
            bytes.len(),
            expected
        )));
    }
    let mut offset = 0;
    for tensor in [&mut model.w1, &mut model.b1, &mut model.w2, &mut model.b2] {
        for v in tensor.iter_mut() {
            let raw: [u8; 4] = bytes[offset..offset + 4].try_into().unwrap();
            *v = f32::from_le_bytes(raw) as f64;
            offset += 4;
        }
    }
    if !model
        .w1
        .iter()
        .chain(&model.b1)
        .chain(&model.w2)
        .chain(&model.b2)
        .all(|v| v.is_finite())
    {
        return Err(Error::BadCheckpoint(
            "parameter file contains non-finite values".into(),
        ));
    }
    Ok(Checkpoint {
        model,
        featurizer,
        epoch: manifest.epoch,
        seed: manifest.seed,
    })
}
