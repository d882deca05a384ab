//! Semi-supervised hyperspectral image classification at desk scale.
//!
//! DREPL (dynamic reliability-enhanced pseudo-labeling) trains a small
//! classifier from a handful of labeled pixels per class by combining three
//! mechanisms:
//!
//! * **EASLP** (edge-aware superpixel label propagation): superpixels are
//!   labeled by majority vote where training pixels exist, by edge-penalized
//!   prototype matching where they do not, then revised by an edge-weighted
//!   neighbor vote. The result selects a balanced pool of unlabeled pixels
//!   for training.
//! * **DHP** (dynamic history-fused prediction): each unlabeled sample keeps
//!   a growing queue of its past predictions, and the current prediction is
//!   blended with the queue's empirical distribution under a ramped weight.
//! * **ATSC** (adaptive tripartite sample categorization): fused confidence
//!   and a prediction-stability gap sort samples into easy / ambiguous /
//!   hard, with thresholds tracked as running means; easy samples get a
//!   pseudo-label loss, ambiguous ones a consistency loss, hard ones none.
//!
//! Everything is deterministic given a seed, CPU-only, and sized so full
//! experiments run in seconds to minutes.
//!
//! # Example
//!
//! ```
//! use drepl::hsicore::{generate_scene, normalize_cube, SceneSpec, SeededRng};
//! use drepl::superpixel::{slic_segment, target_region_count};
//!
//! let spec = SceneSpec {
//!     height: 32, width: 32, bands: 8, num_classes: 3,
//!     region_granularity: 150.0, signature_separation: 0.5, noise_sigma: 0.05,
//! };
//! let mut rng = SeededRng::new(7);
//! let (cube, labels) = generate_scene(&spec, &mut rng).unwrap();
//! let cube = normalize_cube(&cube).unwrap();
//! let m = target_region_count(32, 32, 50.0);
//! let seg = slic_segment(&cube, m, 10.0, 10, &mut rng.derive(1));
//! assert!(seg.num_regions() >= 1);
//! # let _ = labels;
//! ```
//!
//! The `examples/` directory walks through each capability end to end; the
//! `drepl` binary exposes the same pipeline as subcommands (`gen-scene`,
//! `easlp`, `train`, `ablate`, `sweep`, `eval`).

pub mod atsc;
pub mod dhp;
pub mod easlp;
pub mod edgemap;
mod error;
pub mod hsicore;
pub mod model;
mod projection;
pub mod superpixel;
pub mod trainer;

pub mod cli;

pub use error::{Error, Result};
