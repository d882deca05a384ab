//! Experiment configuration: a serde tree loadable from TOML or JSON (by
//! file extension) that round-trips losslessly, plus its validation rules.
//!
//! Every field has a default, so a config file only needs to name what it
//! changes. The resolved config — defaults filled in, overrides applied —
//! is what training runs echo back out as `run.json`.

use crate::atsc::ThresholdState;
use crate::dhp::DhpSchedule;
use crate::error::{Error, Result};
use crate::hsicore::SceneSpec;
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};

/// Synthetic scene parameters (used when no cube files are given).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SceneConfig {
    pub height: usize,
    pub width: usize,
    pub bands: usize,
    pub num_classes: u16,
    pub region_granularity: f64,
    pub signature_separation: f64,
    pub noise_sigma: f64,
}

impl Default for SceneConfig {
    fn default() -> Self {
        SceneConfig {
            height: 64,
            width: 64,
            bands: 16,
            num_classes: 5,
            region_granularity: 256.0,
            signature_separation: 0.4,
            noise_sigma: 0.1,
        }
    }
}

impl SceneConfig {
    pub fn to_spec(&self) -> SceneSpec {
        SceneSpec {
            height: self.height,
            width: self.width,
            bands: self.bands,
            num_classes: self.num_classes,
            region_granularity: self.region_granularity,
            signature_separation: self.signature_separation,
            noise_sigma: self.noise_sigma,
        }
    }
}

/// History-queue and fusion-weight schedule knobs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct QueueConfig {
    pub l_min: usize,
    pub l_max: usize,
    pub alpha_min: f64,
    pub alpha_max: f64,
    /// Epochs with fusion weight pinned to zero; `None` means a tenth of
    /// the epoch budget.
    pub warmup: Option<usize>,
}

impl Default for QueueConfig {
    fn default() -> Self {
        QueueConfig {
            l_min: 50,
            l_max: 300,
            alpha_min: 0.1,
            alpha_max: 0.4,
            warmup: None,
        }
    }
}

impl QueueConfig {
    /// Resolves into a validated schedule for a given epoch budget.
    pub fn to_schedule(&self, epochs: usize) -> Result<DhpSchedule> {
        let warmup = self.warmup.unwrap_or(epochs / 10);
        DhpSchedule::new(
            self.l_min,
            self.l_max,
            self.alpha_min,
            self.alpha_max,
            warmup,
            epochs,
        )
    }
}

/// Initial gating thresholds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ThresholdConfig {
    pub tau_conf: f64,
    /// Initial count-gap threshold; `None` means a quarter of `l_min`.
    pub tau_gap: Option<f64>,
    pub momentum: f64,
}

impl Default for ThresholdConfig {
    fn default() -> Self {
        ThresholdConfig {
            tau_conf: 0.9,
            tau_gap: None,
            momentum: 0.99,
        }
    }
}

impl ThresholdConfig {
    pub fn to_state(&self, l_min: usize) -> Result<ThresholdState> {
        let tau_gap = self.tau_gap.unwrap_or(l_min as f64 / 4.0);
        ThresholdState::new(self.tau_conf, tau_gap, self.momentum)
    }
}

/// Pipeline on/off switches for ablations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ModuleSwitches {
    /// Structure-aware pseudo-label pool; off = uniform random pool.
    pub easlp: bool,
    /// History fusion; off = raw current predictions everywhere.
    pub dhp: bool,
    /// Adaptive tripartite gating; off = fixed 0.95 binary gate.
    pub atsc: bool,
    /// Unlabeled losses altogether; off = supervised-only training.
    pub unlabeled: bool,
}

impl Default for ModuleSwitches {
    fn default() -> Self {
        ModuleSwitches {
            easlp: true,
            dhp: true,
            atsc: true,
            unlabeled: true,
        }
    }
}

/// One experiment, fully specified.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Synthetic scene; ignored when both file paths are set.
    pub scene: SceneConfig,
    /// Optional cube file (little-endian `f32` with JSON sidecar).
    pub cube_path: Option<PathBuf>,
    /// Optional ground-truth label file, required with `cube_path`.
    pub labels_path: Option<PathBuf>,
    /// True labels drawn per class for the supervised set.
    pub labels_per_class: usize,
    /// Average pixels per superpixel (the segmentation granularity).
    pub pixels_per_superpixel: f64,
    /// Superpixel spatial-regularity weight.
    pub compactness: f64,
    /// Superpixel refinement rounds.
    pub slic_iterations: usize,
    /// Pseudo-labeled pixels drawn per class into the unlabeled pool.
    pub pseudo_per_class: usize,
    /// Square patch side for feature extraction.
    pub patch_size: usize,
    /// Hidden width of the classifier.
    pub hidden_dim: usize,
    pub learning_rate: f64,
    pub epochs: usize,
    /// Unlabeled minibatch size.
    pub batch_size: usize,
    /// Strong-augmentation noise scale.
    pub sigma_s: f64,
    /// Sharpening temperature for ambiguous-sample targets.
    pub tau_t: f64,
    /// Ceiling of the ambiguous-loss weight ramp.
    pub lambda_max: f64,
    pub queue: QueueConfig,
    pub thresholds: ThresholdConfig,
    pub modules: ModuleSwitches,
    pub seed: u64,
    /// Independent repeats aggregated into the report.
    pub repeats: usize,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            scene: SceneConfig::default(),
            cube_path: None,
            labels_path: None,
            labels_per_class: 10,
            pixels_per_superpixel: 50.0,
            compactness: 10.0,
            slic_iterations: 10,
            pseudo_per_class: 200,
            patch_size: 9,
            hidden_dim: 64,
            learning_rate: 1e-3,
            epochs: 200,
            batch_size: 64,
            sigma_s: 0.05,
            tau_t: 0.5,
            lambda_max: 0.5,
            queue: QueueConfig::default(),
            thresholds: ThresholdConfig::default(),
            modules: ModuleSwitches::default(),
            seed: 0,
            repeats: 10,
        }
    }
}

impl ExperimentConfig {
    /// Checks every cross-field rule; resolved sub-configs must also build.
    pub fn validate(&self) -> Result<()> {
        if self.cube_path.is_some() != self.labels_path.is_some() {
            return Err(Error::InvalidConfig(
                "cube_path and labels_path must be given together".into(),
            ));
        }
        if self.labels_per_class == 0 {
            return Err(Error::InvalidConfig("labels_per_class must be positive".into()));
        }
        if !(self.pixels_per_superpixel > 0.0) {
            return Err(Error::InvalidConfig(
                "pixels_per_superpixel must be positive".into(),
            ));
        }
        if !(self.compactness > 0.0) {
            return Err(Error::InvalidConfig("compactness must be positive".into()));
        }
        if self.slic_iterations == 0 {
            return Err(Error::InvalidConfig("slic_iterations must be positive".into()));
        }
        if self.pseudo_per_class == 0 {
            return Err(Error::InvalidConfig("pseudo_per_class must be positive".into()));
        }
        if self.patch_size == 0 {
            return Err(Error::InvalidConfig("patch_size must be positive".into()));
        }
        if self.hidden_dim == 0 {
            return Err(Error::InvalidConfig("hidden_dim must be positive".into()));
        }
        if !(self.learning_rate > 0.0) {
            return Err(Error::InvalidConfig("learning_rate must be positive".into()));
        }
        if self.epochs == 0 {
            return Err(Error::InvalidConfig("epochs must be positive".into()));
        }
        if self.batch_size == 0 {
            return Err(Error::InvalidConfig("batch_size must be positive".into()));
        }
        if self.sigma_s < 0.0 {
            return Err(Error::InvalidConfig("sigma_s cannot be negative".into()));
        }
        if !(self.tau_t > 0.0) {
            return Err(Error::InvalidConfig("tau_t must be positive".into()));
        }
        if self.lambda_max < 0.0 {
            return Err(Error::InvalidConfig("lambda_max cannot be negative".into()));
        }
        if self.repeats == 0 {
            return Err(Error::InvalidConfig("repeats must be positive".into()));
        }
        self.queue.to_schedule(self.epochs)?;
        self.thresholds.to_state(self.queue.l_min)?;
        if self.cube_path.is_none() {
            self.scene.to_spec().validate()?;
        }
        Ok(())
    }
}

/// Loads a config from `.toml` or `.json` (decided by extension).
pub fn load_config(path: &Path) -> Result<ExperimentConfig> {
    let text = std::fs::read_to_string(path)?;
    let config: ExperimentConfig = match path.extension().and_then(|e| e.to_str()) {
        Some("json") => serde_json::from_str(&text)?,
        _ => toml::from_str(&text)?,
    };
    config.validate()?;
    Ok(config)
}

/// Writes the fully-resolved config as pretty JSON (the `run.json` format,
/// itself loadable by [`load_config`]).
pub fn save_config(config: &ExperimentConfig, path: &Path) -> Result<()> {
    std::fs::write(path, serde_json::to_vec_pretty(config)?)?;
    Ok(())
}
