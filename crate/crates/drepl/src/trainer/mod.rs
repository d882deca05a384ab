//! The semi-supervised training loop and experiment harnesses.
//!
//! One training run wires the pieces together in a fixed order:
//!
//! 1. Normalize the cube, split labeled pixels into train/test.
//! 2. Build the unlabeled pool once, up front — by edge-aware superpixel
//!    label propagation (balanced per pseudo-class) or, with that module
//!    off, by a uniform draw of the same nominal size.
//! 3. Per epoch, per unlabeled sample: weak forward pass → fuse with the
//!    sample's history → record the pre-fusion prediction → confidence and
//!    count-gap → easy/ambiguous/hard gate → losses on the strong branch.
//!    One optimizer step per minibatch (always including the supervised
//!    loss over every labeled pixel), then an EMA threshold update.
//!
//! Everything is a pure function of the config: scene, splits, pools,
//! initialization, and augmentation all flow from named substreams of the
//! run seed, so repeated runs are bit-identical.

pub mod config;
pub mod metrics;

pub use config::{
    load_config, save_config, ExperimentConfig, ModuleSwitches, QueueConfig, SceneConfig,
    ThresholdConfig,
};
pub use metrics::{
    evaluate, evaluate_features, AggregateMetrics, ConfusionMatrix, MetricsReport,
};

use crate::atsc::{categorize, confidence, count_gap, update_thresholds, SampleCategory};
use crate::dhp::{alpha_at, fuse, history_distribution, record_prediction, HistoryQueue};
use crate::easlp;
use crate::edgemap::{normalize_edges, region_edge_intensity, sobel_magnitude, spectral_mean_gray};
use crate::error::{Error, Result};
use crate::hsicore::{
    extract_patch, generate_scene, normalize_cube, read_cube, read_labels, HsiCube, LabelMap,
    SeededRng,
};
use crate::model::{
    augment, lambda_schedule, total_loss, AdamState, Mlp, PatchFeaturizer, UnlabeledBatch,
};
use crate::superpixel::{slic_segment, target_region_count};
use serde::{Deserialize, Serialize};
use std::io::Write as _;
use std::path::Path;

/// Confidence gate used when adaptive categorization is switched off.
pub const FIXED_CONFIDENCE_GATE: f64 = 0.95;

// Substream tags deriving independent generators from one run seed.
pub(crate) const TAG_SCENE: u64 = 0x5C3E;
const TAG_RUN: u64 = 0x40B1;
const TAG_SPLIT: u64 = 0x5711;
const TAG_SLIC: u64 = 0x517C;
const TAG_POOL: u64 = 0x9001;
const TAG_INIT: u64 = 0x1217;
const TAG_TRAIN: u64 = 0x7421;

/// Splits labeled pixels into `per_class` train pixels per class and the
/// rest as test, uniformly at random, deterministically per seed.
///
/// Both lists come back sorted by (class, pixel index).
pub fn split_train_test(
    labels: &LabelMap,
    per_class: usize,
    rng: &mut SeededRng,
) -> Result<(Vec<(usize, u16)>, Vec<(usize, u16)>)> {
    let labeled = labels.labeled_pixels();
    if labeled.is_empty() {
        return Err(Error::NoLabeledPixels);
    }
    let mut train = Vec::new();
    let mut test = Vec::new();
    let mut i = 0;
    while i < labeled.len() {
        let class = labeled[i].1;
        let mut pixels = Vec::new();
        while i < labeled.len() && labeled[i].1 == class {
            pixels.push(labeled[i].0);
            i += 1;
        }
        if pixels.len() < per_class + 1 {
            return Err(Error::InsufficientClass {
                class,
                available: pixels.len(),
                needed: per_class + 1,
            });
        }
        let mut picked = rng.sample_without_replacement(pixels.len(), per_class);
        picked.sort_unstable();
        let mut next_pick = 0;
        for (j, &pixel) in pixels.iter().enumerate() {
            if next_pick < picked.len() && picked[next_pick] == j {
                train.push((pixel, class));
                next_pick += 1;
            } else {
                test.push((pixel, class));
            }
        }
    }
    Ok((train, test))
}

/// One row of the per-epoch training log.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EpochRecord {
    pub epoch: usize,
    pub l_sup: f64,
    pub l_easy: f64,
    pub l_amb: f64,
    pub lambda_a: f64,
    pub alpha_t: f64,
    pub l_total: f64,
    pub tau_conf: f64,
    pub tau_gap: f64,
    pub n_easy: usize,
    pub n_amb: usize,
    pub n_hard: usize,
    pub oa_test: f64,
}

/// Writes the epoch log as CSV with a fixed header.
pub fn write_epoch_log(records: &[EpochRecord], path: &Path) -> Result<()> {
    let mut out = Vec::new();
    writeln!(
        out,
        "epoch,l_sup,l_easy,l_amb,lambda_a,alpha_t,l_total,tau_conf,tau_gap,n_easy,n_amb,n_hard,oa_test"
    )?;
    for r in records {
        writeln!(
            out,
            "{},{:.9},{:.9},{:.9},{:.9},{:.9},{:.9},{:.9},{:.9},{},{},{},{:.9}",
            r.epoch,
            r.l_sup,
            r.l_easy,
            r.l_amb,
            r.lambda_a,
            r.alpha_t,
            r.l_total,
            r.tau_conf,
            r.tau_gap,
            r.n_easy,
            r.n_amb,
            r.n_hard,
            r.oa_test
        )?;
    }
    std::fs::write(path, out)?;
    Ok(())
}

/// Everything one training run produces.
#[derive(Debug, Clone)]
pub struct TrainOutcome {
    pub model: Mlp,
    pub featurizer: PatchFeaturizer,
    pub report: MetricsReport,
    pub epoch_log: Vec<EpochRecord>,
    /// The seed this run derived all of its randomness from.
    pub run_seed: u64,
}

/// Trains once on a prepared cube + ground truth. `run_seed` isolates this
/// repeat; every random decision flows from one of its substreams.
pub fn run_training(
    cube: &HsiCube,
    truth: &LabelMap,
    config: &ExperimentConfig,
    run_seed: u64,
) -> Result<TrainOutcome> {
    if cube.height() != truth.height() || cube.width() != truth.width() {
        return Err(Error::DimensionMismatch(format!(
            "cube is {}x{}, labels are {}x{}",
            cube.height(),
            cube.width(),
            truth.height(),
            truth.width()
        )));
    }
    let root = SeededRng::new(run_seed);
    let mut split_rng = root.derive(TAG_SPLIT);
    let mut slic_rng = root.derive(TAG_SLIC);
    let mut pool_rng = root.derive(TAG_POOL);
    let mut init_rng = root.derive(TAG_INIT);
    let mut train_rng = root.derive(TAG_TRAIN);

    let norm = normalize_cube(cube)?;
    let (h, w) = (norm.height(), norm.width());
    let num_classes = usize::from(truth.num_classes());
    if num_classes == 0 {
        return Err(Error::NoLabeledPixels);
    }

    let (train_pixels, test_pixels) =
        split_train_test(truth, config.labels_per_class, &mut split_rng)?;
    let mut train_label_data = vec![0u16; norm.num_pixels()];
    for &(p, c) in &train_pixels {
        train_label_data[p] = c;
    }
    let train_map = LabelMap::new(h, w, train_label_data)?;

    // Oversized patches are clamped to the scene; features stay well-formed.
    let patch_size = config.patch_size.min(h.min(w));

    // The unlabeled pool, built once. The structure-aware path balances
    // per pseudo-class; the fallback draws uniformly at the same nominal
    // size. Supervised-only runs still build it so their optimizer takes
    // the same number of steps per epoch.
    let pool: Vec<usize> = if config.modules.easlp {
        let m = target_region_count(h, w, config.pixels_per_superpixel);
        let seg = slic_segment(
            &norm,
            m,
            config.compactness,
            config.slic_iterations,
            &mut slic_rng,
        );
        let edges = normalize_edges(sobel_magnitude(&spectral_mean_gray(&norm))?);
        let region_edges = region_edge_intensity(&edges, &seg)?;
        let state = easlp::propagate(&norm, &seg, &train_map, &region_edges)?;
        let sample =
            easlp::expand_and_sample(&state, &train_map, config.pseudo_per_class, &mut pool_rng);
        sample.flattened().iter().map(|&(p, _)| p).collect()
    } else {
        let unlabeled: Vec<usize> = (0..norm.num_pixels())
            .filter(|&p| train_map.labels()[p] == 0)
            .collect();
        let want = (config.pseudo_per_class * num_classes).min(unlabeled.len());
        let mut chosen: Vec<usize> = pool_rng
            .sample_without_replacement(unlabeled.len(), want)
            .into_iter()
            .map(|i| unlabeled[i])
            .collect();
        chosen.sort_unstable();
        chosen
    };

    let featurizer = PatchFeaturizer::fit(&norm, patch_size);
    let mut model = Mlp::xavier_init(
        featurizer.input_dim(),
        config.hidden_dim,
        num_classes,
        &mut init_rng,
    )?;
    let mut adam = AdamState::new(&model, config.learning_rate);

    let featurize_pixel = |pixel: usize| -> Result<Vec<f64>> {
        let patch = extract_patch(&norm, pixel / w, pixel % w, patch_size)?;
        featurizer.features(&patch)
    };
    let labeled_features: Vec<Vec<f64>> = train_pixels
        .iter()
        .map(|&(p, _)| featurize_pixel(p))
        .collect::<Result<_>>()?;
    let labeled_targets: Vec<u16> = train_pixels.iter().map(|&(_, c)| c).collect();
    let test_features: Vec<Vec<f64>> = test_pixels
        .iter()
        .map(|&(p, _)| featurize_pixel(p))
        .collect::<Result<_>>()?;
    let test_truths: Vec<u16> = test_pixels.iter().map(|&(_, c)| c).collect();

    let sched = config.queue.to_schedule(config.epochs)?;
    let mut thresholds = config.thresholds.to_state(config.queue.l_min)?;
    let mut queues: Vec<HistoryQueue> = pool
        .iter()
        .map(|_| HistoryQueue::new(num_classes))
        .collect();
    let steps_per_epoch = pool.len().div_ceil(config.batch_size).max(1);

    let mut epoch_log = Vec::with_capacity(config.epochs);
    for t in 0..config.epochs {
        let alpha_t = if config.modules.dhp {
            alpha_at(t, &sched)
        } else {
            0.0
        };
        let lambda_a = lambda_schedule(t, config.epochs, config.lambda_max);

        let mut sums = (0.0f64, 0.0f64, 0.0f64, 0.0f64); // sup, easy, amb, total
        let (mut n_easy, mut n_amb, mut n_hard) = (0usize, 0usize, 0usize);
        let mut batches = 0usize;

        if config.modules.unlabeled && !pool.is_empty() {
            let mut order: Vec<usize> = (0..pool.len()).collect();
            train_rng.shuffle(&mut order);
            for chunk in order.chunks(config.batch_size) {
                let mut unlabeled_batch = UnlabeledBatch::default();
                let mut batch_confs = Vec::with_capacity(chunk.len());
                let mut batch_gaps = Vec::with_capacity(chunk.len());
                for &idx in chunk {
                    let patch =
                        extract_patch(&norm, pool[idx] / w, pool[idx] % w, patch_size)?;
                    let pair = augment(&patch, &mut train_rng, config.sigma_s);
                    let weak_x = featurizer.features(&pair.weak)?;
                    let strong_x = featurizer.features(&pair.strong)?;
                    let (_, current) = model.forward(&weak_x)?;

                    // Fuse with history first; the sample's own fresh
                    // prediction is recorded afterwards, so the queue feeds
                    // on pre-fusion outputs only.
                    let fused = if config.modules.dhp {
                        match history_distribution(&queues[idx]) {
                            Ok(history) => fuse(&current, &history, alpha_t),
                            Err(_) => current.clone(),
                        }
                    } else {
                        current.clone()
                    };
                    record_prediction(&mut queues[idx], current.argmax_class(), t, &sched);

                    let conf = confidence(&fused);
                    let gap = f64::from(count_gap(&queues[idx]));
                    let category = if config.modules.atsc {
                        categorize(conf, gap, &thresholds)
                    } else if conf >= FIXED_CONFIDENCE_GATE {
                        SampleCategory::Easy
                    } else {
                        SampleCategory::Hard
                    };
                    match category {
                        SampleCategory::Easy => {
                            n_easy += 1;
                            unlabeled_batch.easy_labels.push(fused.argmax_class());
                            unlabeled_batch.easy_features.push(strong_x);
                        }
                        SampleCategory::Ambiguous => {
                            n_amb += 1;
                            unlabeled_batch.ambiguous_targets.push(fused.clone());
                            unlabeled_batch.ambiguous_features.push(strong_x);
                        }
                        SampleCategory::Hard => n_hard += 1,
                    }
                    batch_confs.push(conf);
                    batch_gaps.push(gap);
                }
                let (breakdown, grads) = total_loss(
                    &model,
                    &labeled_features,
                    &labeled_targets,
                    &unlabeled_batch,
                    config.tau_t,
                    lambda_a,
                )?;
                adam.step(&mut model, &grads);
                if config.modules.atsc {
                    update_thresholds(&mut thresholds, &batch_confs, &batch_gaps)?;
                }
                sums.0 += breakdown.l_sup;
                sums.1 += breakdown.l_easy;
                sums.2 += breakdown.l_amb;
                sums.3 += breakdown.l_total;
                batches += 1;
            }
        } else {
            // Supervised-only: the same number of optimizer steps, no
            // unlabeled terms.
            let empty = UnlabeledBatch::default();
            for _ in 0..steps_per_epoch {
                let (breakdown, grads) = total_loss(
                    &model,
                    &labeled_features,
                    &labeled_targets,
                    &empty,
                    config.tau_t,
                    lambda_a,
                )?;
                adam.step(&mut model, &grads);
                sums.0 += breakdown.l_sup;
                sums.3 += breakdown.l_total;
                batches += 1;
            }
        }

        let epoch_eval = evaluate_features(&model, &test_features, &test_truths)?;
        let b = batches.max(1) as f64;
        epoch_log.push(EpochRecord {
            epoch: t,
            l_sup: sums.0 / b,
            l_easy: sums.1 / b,
            l_amb: sums.2 / b,
            lambda_a,
            alpha_t,
            l_total: sums.3 / b,
            tau_conf: thresholds.tau_conf,
            tau_gap: thresholds.tau_gap,
            n_easy,
            n_amb,
            n_hard,
            oa_test: epoch_eval.oa,
        });
    }

    let report = evaluate_features(&model, &test_features, &test_truths)?;
    Ok(TrainOutcome {
        model,
        featurizer,
        report,
        epoch_log,
        run_seed,
    })
}

/// Serializable half of an experiment: per-repeat metrics plus aggregates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub runs: Vec<MetricsReport>,
    pub aggregate: AggregateMetrics,
}

/// Full result of `run_experiment`: the report plus each repeat's trained
/// model and log.
#[derive(Debug, Clone)]
pub struct ExperimentOutput {
    pub report: ExperimentReport,
    pub outcomes: Vec<TrainOutcome>,
}

/// Loads the experiment's cube and ground truth: from files when paths are
/// configured, otherwise a synthetic scene derived from the config seed.
/// The scene is fixed across repeats; only splits and training vary.
pub fn prepare_scene(config: &ExperimentConfig) -> Result<(HsiCube, LabelMap)> {
    match (&config.cube_path, &config.labels_path) {
        (Some(cube_path), Some(labels_path)) => {
            let cube = read_cube(cube_path)?;
            let labels = read_labels(labels_path)?;
            if cube.height() != labels.height() || cube.width() != labels.width() {
                return Err(Error::DimensionMismatch(format!(
                    "cube file is {}x{}, label file is {}x{}",
                    cube.height(),
                    cube.width(),
                    labels.height(),
                    labels.width()
                )));
            }
            Ok((cube, labels))
        }
        _ => {
            let mut scene_rng = SeededRng::new(config.seed).derive(TAG_SCENE);
            generate_scene(&config.scene.to_spec(), &mut scene_rng)
        }
    }
}

/// The seed of repeat `r` under a config's base seed.
pub fn repeat_seed(base_seed: u64, repeat: usize) -> u64 {
    SeededRng::new(base_seed)
        .derive(TAG_RUN.wrapping_add(repeat as u64))
        .seed()
}

/// Runs `config.repeats` independent trainings on one shared scene and
/// aggregates their metrics.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentOutput> {
    config.validate()?;
    let (cube, truth) = prepare_scene(config)?;
    let mut outcomes = Vec::with_capacity(config.repeats);
    for r in 0..config.repeats {
        outcomes.push(run_training(
            &cube,
            &truth,
            config,
            repeat_seed(config.seed, r),
        )?);
    }
    let runs: Vec<MetricsReport> = outcomes.iter().map(|o| o.report.clone()).collect();
    let aggregate = AggregateMetrics::over(&runs);
    Ok(ExperimentOutput {
        report: ExperimentReport { runs, aggregate },
        outcomes,
    })
}

/// The standard ablation grid: the full pipeline and one-module-off
/// variants, all sharing the config's scene and per-repeat seeds so
/// comparisons are paired.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PipelineVariant {
    Full,
    NoEaslp,
    NoDhp,
    NoAtsc,
    SupervisedOnly,
}

impl PipelineVariant {
    pub const ALL: [PipelineVariant; 5] = [
        PipelineVariant::Full,
        PipelineVariant::NoEaslp,
        PipelineVariant::NoDhp,
        PipelineVariant::NoAtsc,
        PipelineVariant::SupervisedOnly,
    ];

    pub fn name(self) -> &'static str {
        match self {
            PipelineVariant::Full => "full",
            PipelineVariant::NoEaslp => "no-easlp",
            PipelineVariant::NoDhp => "no-dhp",
            PipelineVariant::NoAtsc => "no-atsc",
            PipelineVariant::SupervisedOnly => "supervised-only",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|v| v.name() == name)
    }

    /// The config switches this variant trains with.
    pub fn switches(self) -> ModuleSwitches {
        let mut s = ModuleSwitches::default();
        match self {
            PipelineVariant::Full => {}
            PipelineVariant::NoEaslp => s.easlp = false,
            PipelineVariant::NoDhp => s.dhp = false,
            PipelineVariant::NoAtsc => s.atsc = false,
            PipelineVariant::SupervisedOnly => s.unlabeled = false,
        }
        s
    }

    pub fn apply(self, config: &ExperimentConfig) -> ExperimentConfig {
        let mut out = config.clone();
        out.modules = self.switches();
        out
    }
}

/// Runs every requested variant under the same seed and scene.
pub fn run_ablation(
    config: &ExperimentConfig,
    variants: &[PipelineVariant],
) -> Result<Vec<(PipelineVariant, ExperimentOutput)>> {
    let mut out = Vec::with_capacity(variants.len());
    for &variant in variants {
        out.push((variant, run_experiment(&variant.apply(config))?));
    }
    Ok(out)
}

/// The hyperparameters the sweep harness can vary.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepParam {
    AlphaMax,
    AlphaMin,
    LMin,
    LMax,
    LabelsPerClass,
}

impl SweepParam {
    pub fn name(self) -> &'static str {
        match self {
            SweepParam::AlphaMax => "alpha-max",
            SweepParam::AlphaMin => "alpha-min",
            SweepParam::LMin => "l-min",
            SweepParam::LMax => "l-max",
            SweepParam::LabelsPerClass => "labels-per-class",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        [
            SweepParam::AlphaMax,
            SweepParam::AlphaMin,
            SweepParam::LMin,
            SweepParam::LMax,
            SweepParam::LabelsPerClass,
        ]
        .into_iter()
        .find(|p| p.name() == name)
    }

    /// A copy of the config with this parameter set to `value`. Integer
    /// parameters reject fractional values.
    pub fn apply(self, config: &ExperimentConfig, value: f64) -> Result<ExperimentConfig> {
        let mut out = config.clone();
        let as_count = |value: f64| -> Result<usize> {
            if value < 1.0 || value.fract() != 0.0 {
                return Err(Error::InvalidConfig(format!(
                    "{} must be a positive whole number, got {value}",
                    self.name()
                )));
            }
            Ok(value as usize)
        };
        match self {
            SweepParam::AlphaMax => out.queue.alpha_max = value,
            SweepParam::AlphaMin => out.queue.alpha_min = value,
            SweepParam::LMin => out.queue.l_min = as_count(value)?,
            SweepParam::LMax => out.queue.l_max = as_count(value)?,
            SweepParam::LabelsPerClass => out.labels_per_class = as_count(value)?,
        }
        out.validate()?;
        Ok(out)
    }
}

/// Runs the experiment once per sweep value.
pub fn run_sweep(
    config: &ExperimentConfig,
    param: SweepParam,
    values: &[f64],
) -> Result<Vec<(f64, ExperimentOutput)>> {
    if values.is_empty() {
        return Err(Error::InvalidConfig("sweep needs at least one value".into()));
    }
    let mut out = Vec::with_capacity(values.len());
    for &value in values {
        out.push((value, run_experiment(&param.apply(config, value)?)?));
    }
    Ok(out)
}
