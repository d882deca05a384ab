//! On-disk raster formats.
//!
//! A cube `<name>.hsi` is the flat `(y, x, band)` payload as little-endian
//! `f32`, described by a JSON sidecar `<name>.hsi.json`:
//!
//! ```json
//! {"height": 64, "width": 64, "bands": 16, "dtype": "f32", "order": "yxb"}
//! ```
//!
//! A label raster `<name>.lab` is flat little-endian `u16` in row-major
//! `(y, x)` order with a matching sidecar (`"dtype": "u16"`, `"order": "yx"`);
//! id `0` means unlabeled. Readers validate the sidecar against the payload
//! length and fail rather than guess.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hsicore::{HsiCube, LabelMap};

#[derive(Debug, Serialize, Deserialize)]
struct CubeSidecar {
    height: usize,
    width: usize,
    bands: usize,
    dtype: String,
    order: String,
}

#[derive(Debug, Serialize, Deserialize)]
struct LabelSidecar {
    height: usize,
    width: usize,
    dtype: String,
    order: String,
}

pub(crate) fn sidecar_path(path: &Path) -> std::path::PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".json");
    std::path::PathBuf::from(s)
}

/// Writes `<path>` (flat little-endian `f32`) and `<path>.json`.
pub fn write_cube(cube: &HsiCube, path: &Path) -> Result<()> {
    let mut payload = Vec::with_capacity(cube.data().len() * 4);
    for &v in cube.data() {
        payload.extend_from_slice(&v.to_le_bytes());
    }
    fs::write(path, payload)?;
    let sidecar = CubeSidecar {
        height: cube.height(),
        width: cube.width(),
        bands: cube.bands(),
        dtype: "f32".into(),
        order: "yxb".into(),
    };
    fs::write(sidecar_path(path), serde_json::to_vec_pretty(&sidecar)?)?;
    Ok(())
}

/// Reads a cube written by [`write_cube`], validating the sidecar.
pub fn read_cube(path: &Path) -> Result<HsiCube> {
    let sidecar: CubeSidecar = serde_json::from_slice(&fs::read(sidecar_path(path))?)?;
    if sidecar.dtype != "f32" {
        return Err(Error::HeaderMismatch(format!(
            "cube dtype must be f32, found {:?}",
            sidecar.dtype
        )));
    }
    if sidecar.order != "yxb" {
        return Err(Error::HeaderMismatch(format!(
            "cube order must be yxb, found {:?}",
            sidecar.order
        )));
    }
    if sidecar.bands == 0 {
        return Err(Error::HeaderMismatch("bands must be positive".into()));
    }
    let payload = fs::read(path)?;
    let expected = sidecar.height * sidecar.width * sidecar.bands * 4;
    if payload.len() < expected {
        return Err(Error::TruncatedPayload {
            expected,
            got: payload.len(),
        });
    }
    if payload.len() > expected {
        return Err(Error::HeaderMismatch(format!(
            "payload has {} bytes but the sidecar describes {}",
            payload.len(),
            expected
        )));
    }
    let data: Vec<f32> = payload
        .chunks_exact(4)
        .map(|c| f32::from_le_bytes([c[0], c[1], c[2], c[3]]))
        .collect();
    HsiCube::new(sidecar.height, sidecar.width, sidecar.bands, data)
}

/// Writes `<path>` (flat little-endian `u16`) and `<path>.json`.
pub fn write_labels(labels: &LabelMap, path: &Path) -> Result<()> {
    let mut payload = Vec::with_capacity(labels.labels().len() * 2);
    for &v in labels.labels() {
        payload.extend_from_slice(&v.to_le_bytes());
    }
    fs::write(path, payload)?;
    let sidecar = LabelSidecar {
        height: labels.height(),
        width: labels.width(),
        dtype: "u16".into(),
        order: "yx".into(),
    };
    fs::write(sidecar_path(path), serde_json::to_vec_pretty(&sidecar)?)?;
    Ok(())
}

/// Reads a label raster written by [`write_labels`], validating the sidecar.
pub fn read_labels(path: &Path) -> Result<LabelMap> {
    let sidecar: LabelSidecar = serde_json::from_slice(&fs::read(sidecar_path(path))?)?;
    if sidecar.dtype != "u16" {
        return Err(Error::HeaderMismatch(format!(
            "label dtype must be u16, found {:?}",
            sidecar.dtype
        )));
    }
    if sidecar.order != "yx" {
        return Err(Error::HeaderMismatch(format!(
            "label order must be yx, found {:?}",
            sidecar.order
        )));
    }
    let payload = fs::read(path)?;
    let expected = sidecar.height * sidecar.width * 2;
    if payload.len() < expected {
        return Err(Error::TruncatedPayload {
            expected,
            got: payload.len(),
        });
    }
    if payload.len() > expected {
        return Err(Error::HeaderMismatch(format!(
            "payload has {} bytes but the sidecar describes {}",
            payload.len(),
            expected
        )));
    }
    let labels: Vec<u16> = payload
        .chunks_exact(2)
        .map(|c| u16::from_le_bytes([c[0], c[1]]))
        .collect();
    LabelMap::new(sidecar.height, sidecar.width, labels)
}
