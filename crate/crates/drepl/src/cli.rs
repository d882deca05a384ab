//! Command-line entry points: scene generation, label-propagation
//! inspection, training, ablations, parameter sweeps, and checkpoint
//! evaluation.
//!
//! Conventions shared by every subcommand:
//! * all artifacts land under `--out DIR`, which must already exist;
//! * a `run.json` echoing the fully resolved parameters (seed included) is
//!   always written, so any run can be reproduced bit for bit;
//! * outputs carry no timestamps or machine identifiers.

use crate::easlp;
use crate::edgemap::{normalize_edges, region_edge_intensity, sobel_magnitude, spectral_mean_gray};
use crate::error::{Error, Result};
use crate::hsicore::{
    generate_scene, normalize_cube, read_cube, read_labels, write_cube, write_labels, LabelMap,
    SeededRng,
};
use crate::model::{load_checkpoint, save_checkpoint};
use crate::superpixel::{slic_segment, target_region_count};
use crate::trainer::{
    self, evaluate, load_config, save_config, split_train_test, ExperimentConfig,
    ExperimentReport, MetricsReport, PipelineVariant, SceneConfig, SweepParam,
};
use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};

/// Top-level argument parser.
#[derive(Debug, Parser)]
#[command(
    name = "drepl",
    about = "Semi-supervised hyperspectral classification experiments",
    disable_version_flag = true
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a synthetic labeled scene and write it as cube + label files.
    GenScene(GenSceneArgs),
    /// Run edge-aware superpixel label propagation and report its accuracy.
    Easlp(EaslpArgs),
    /// Train the semi-supervised pipeline and write metrics, logs, and
    /// checkpoints.
    Train(TrainArgs),
    /// Train the full pipeline and its one-module-off variants on paired
    /// seeds.
    Ablate(AblateArgs),
    /// Re-run the experiment across a grid of one hyperparameter.
    Sweep(SweepArgs),
    /// Score a saved checkpoint on a labeled cube.
    Eval(EvalArgs),
}

#[derive(Debug, Args)]
pub struct GenSceneArgs {
    /// Existing directory to write scene.hsi / scene.labels / run.json into.
    #[arg(long)]
    pub out: PathBuf,
    /// Optional JSON parameter file (the run.json of a previous generation).
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub height: Option<usize>,
    #[arg(long)]
    pub width: Option<usize>,
    #[arg(long)]
    pub bands: Option<usize>,
    #[arg(long)]
    pub classes: Option<u16>,
    /// Expected pixels per generated region.
    #[arg(long)]
    pub granularity: Option<f64>,
    /// Euclidean distance between class signatures.
    #[arg(long)]
    pub separation: Option<f64>,
    /// Additive Gaussian noise level.
    #[arg(long)]
    pub noise: Option<f64>,
}

#[derive(Debug, Args)]
pub struct EaslpArgs {
    /// Cube file written by gen-scene (or compatible).
    #[arg(long)]
    pub cube: PathBuf,
    /// Ground-truth label file.
    #[arg(long)]
    pub labels: PathBuf,
    /// Existing directory for the report and rasters.
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// True labels drawn per class to seed propagation.
    #[arg(long, default_value_t = 10)]
    pub labels_per_class: usize,
    /// Average pixels per superpixel.
    #[arg(long, default_value_t = 50.0)]
    pub pixels_per_superpixel: f64,
    #[arg(long, default_value_t = 10.0)]
    pub compactness: f64,
    #[arg(long, default_value_t = 10)]
    pub iterations: usize,
    /// Pseudo-labeled pixels drawn per class into the balanced pool.
    #[arg(long, default_value_t = 200)]
    pub pseudo_per_class: usize,
    /// Also write stage1/stage2/provenance label rasters.
    #[arg(long)]
    pub dump_easlp_stages: bool,
}

#[derive(Debug, Args)]
pub struct TrainArgs {
    /// Config file (.toml or .json); defaults apply when omitted.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Existing directory for run.json, metrics.json, logs, checkpoints.
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub epochs: Option<usize>,
    #[arg(long)]
    pub repeats: Option<usize>,
    #[arg(long)]
    pub labels_per_class: Option<usize>,
    /// Train a single ablation variant: full, no-easlp, no-dhp, no-atsc,
    /// or supervised-only.
    #[arg(long)]
    pub ablate: Option<String>,
    /// Sweep one hyperparameter (alpha-max, alpha-min, l-min, l-max,
    /// labels-per-class) over --values instead of a single run.
    #[arg(long)]
    pub sweep: Option<String>,
    /// Comma-separated sweep values, e.g. 0.2,0.3,0.4.
    #[arg(long)]
    pub values: Option<String>,
}

#[derive(Debug, Args)]
pub struct AblateArgs {
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub epochs: Option<usize>,
    #[arg(long)]
    pub repeats: Option<usize>,
    /// Comma-separated subset of variants; all five when omitted.
    #[arg(long)]
    pub variants: Option<String>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub epochs: Option<usize>,
    #[arg(long)]
    pub repeats: Option<usize>,
    /// Which hyperparameter to vary.
    #[arg(long)]
    pub param: String,
    /// Comma-separated values.
    #[arg(long)]
    pub values: String,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    /// Checkpoint parameter file (its .json manifest sits beside it).
    #[arg(long)]
    pub checkpoint: PathBuf,
    #[arg(long)]
    pub cube: PathBuf,
    #[arg(long)]
    pub labels: PathBuf,
    /// Existing directory for eval.json and run.json.
    #[arg(long)]
    pub out: PathBuf,
    /// Rebuild the train/test split with this many train pixels per class
    /// and score the test half; 0 scores every labeled pixel.
    #[arg(long, default_value_t = 0)]
    pub per_class: usize,
    /// Split seed (matching the training run's run_seed reproduces its
    /// test set).
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

/// Dispatches a parsed command line.
pub fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::GenScene(args) => cmd_gen_scene(args),
        Command::Easlp(args) => cmd_easlp(args),
        Command::Train(args) => cmd_train(args),
        Command::Ablate(args) => cmd_ablate(args),
        Command::Sweep(args) => cmd_sweep(args),
        Command::Eval(args) => cmd_eval(args),
    }
}

fn require_dir(dir: &Path) -> Result<()> {
    if !dir.is_dir() {
        return Err(Error::InvalidConfig(format!(
            "output directory {} does not exist",
            dir.display()
        )));
    }
    Ok(())
}

fn write_json<T: Serialize>(value: &T, path: &Path) -> Result<()> {
    std::fs::write(path, serde_json::to_vec_pretty(value)?)?;
    Ok(())
}

/// Parameters echoed (and accepted back) by gen-scene.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GenSceneParams {
    pub scene: SceneConfig,
    pub seed: u64,
}

impl Default for GenSceneParams {
    fn default() -> Self {
        GenSceneParams {
            scene: SceneConfig::default(),
            seed: 0,
        }
    }
}

fn cmd_gen_scene(args: GenSceneArgs) -> Result<()> {
    require_dir(&args.out)?;
    let mut params = match &args.config {
        Some(path) => serde_json::from_str(&std::fs::read_to_string(path)?)?,
        None => GenSceneParams::default(),
    };
    if let Some(seed) = args.seed {
        params.seed = seed;
    }
    if let Some(v) = args.height {
        params.scene.height = v;
    }
    if let Some(v) = args.width {
        params.scene.width = v;
    }
    if let Some(v) = args.bands {
        params.scene.bands = v;
    }
    if let Some(v) = args.classes {
        params.scene.num_classes = v;
    }
    if let Some(v) = args.granularity {
        params.scene.region_granularity = v;
    }
    if let Some(v) = args.separation {
        params.scene.signature_separation = v;
    }
    if let Some(v) = args.noise {
        params.scene.noise_sigma = v;
    }

    // Same derivation as the trainer, so one seed names one scene across
    // every subcommand.
    let mut rng = SeededRng::new(params.seed).derive(crate::trainer::TAG_SCENE);
    let (cube, labels) = generate_scene(&params.scene.to_spec(), &mut rng)?;
    write_cube(&cube, &args.out.join("scene.hsi"))?;
    write_labels(&labels, &args.out.join("scene.labels"))?;
    write_json(&params, &args.out.join("run.json"))?;
    println!(
        "wrote {}x{}x{} scene with {} classes to {}",
        cube.height(),
        cube.width(),
        cube.bands(),
        labels.num_classes(),
        args.out.display()
    );
    Ok(())
}

/// run.json of the easlp subcommand.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EaslpParams {
    pub cube: PathBuf,
    pub labels: PathBuf,
    pub seed: u64,
    pub labels_per_class: usize,
    pub pixels_per_superpixel: f64,
    pub compactness: f64,
    pub iterations: usize,
    pub pseudo_per_class: usize,
    pub dump_easlp_stages: bool,
}

/// Propagation quality report.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EaslpReport {
    pub num_regions: usize,
    pub majority_regions: usize,
    pub similarity_regions: usize,
    pub corrected_regions: usize,
    /// Fraction of ground-truth pixels the stage-1 expansion labels right.
    pub stage1_pixel_accuracy: f64,
    /// Same, after neighbor correction.
    pub stage2_pixel_accuracy: f64,
    pub pool_classes: Vec<u16>,
    pub pool_sizes: Vec<usize>,
    pub skipped_classes: Vec<u16>,
}

fn pixel_accuracy(pseudo: &[u16], truth: &LabelMap) -> f64 {
    let mut hits = 0usize;
    let mut total = 0usize;
    for (p, &t) in truth.labels().iter().enumerate() {
        if t != 0 {
            total += 1;
            if pseudo[p] == t {
                hits += 1;
            }
        }
    }
    if total == 0 {
        0.0
    } else {
        hits as f64 / total as f64
    }
}

fn cmd_easlp(args: EaslpArgs) -> Result<()> {
    require_dir(&args.out)?;
    let cube = read_cube(&args.cube)?;
    let truth = read_labels(&args.labels)?;
    if cube.height() != truth.height() || cube.width() != truth.width() {
        return Err(Error::DimensionMismatch(format!(
            "cube is {}x{}, labels are {}x{}",
            cube.height(),
            cube.width(),
            truth.height(),
            truth.width()
        )));
    }
    let params = EaslpParams {
        cube: args.cube.clone(),
        labels: args.labels.clone(),
        seed: args.seed,
        labels_per_class: args.labels_per_class,
        pixels_per_superpixel: args.pixels_per_superpixel,
        compactness: args.compactness,
        iterations: args.iterations,
        pseudo_per_class: args.pseudo_per_class,
        dump_easlp_stages: args.dump_easlp_stages,
    };

    let norm = normalize_cube(&cube)?;
    let root = SeededRng::new(args.seed);
    let (train_pixels, _) =
        split_train_test(&truth, args.labels_per_class, &mut root.derive(0x5711))?;
    let mut train_data = vec![0u16; norm.num_pixels()];
    for &(p, c) in &train_pixels {
        train_data[p] = c;
    }
    let train_map = LabelMap::new(norm.height(), norm.width(), train_data)?;

    let m = target_region_count(norm.height(), norm.width(), args.pixels_per_superpixel);
    let seg = slic_segment(
        &norm,
        m,
        args.compactness,
        args.iterations,
        &mut root.derive(0x517C),
    );
    let edges = normalize_edges(sobel_magnitude(&spectral_mean_gray(&norm))?);
    let region_edges = region_edge_intensity(&edges, &seg)?;
    let state = easlp::propagate(&norm, &seg, &train_map, &region_edges)?;
    let pool = easlp::expand_and_sample(
        &state,
        &train_map,
        args.pseudo_per_class,
        &mut root.derive(0x9001),
    );

    let stage1_pixels = easlp::expand_pixel_labels(&state.stage1_region_labels, &seg, &train_map);
    let report = EaslpReport {
        num_regions: seg.num_regions(),
        majority_regions: state
            .provenance
            .iter()
            .filter(|&&p| p == easlp::Provenance::Majority)
            .count(),
        similarity_regions: state
            .provenance
            .iter()
            .filter(|&&p| p == easlp::Provenance::Similarity)
            .count(),
        corrected_regions: state
            .provenance
            .iter()
            .filter(|&&p| p == easlp::Provenance::Corrected)
            .count(),
        stage1_pixel_accuracy: pixel_accuracy(&stage1_pixels, &truth),
        stage2_pixel_accuracy: pixel_accuracy(&state.pixel_pseudo_labels, &truth),
        pool_classes: pool.classes.clone(),
        pool_sizes: pool.pixels_per_class.iter().map(Vec::len).collect(),
        skipped_classes: pool.skipped.clone(),
    };

    if args.dump_easlp_stages {
        let (h, w) = (norm.height(), norm.width());
        let stage2_map = LabelMap::new(h, w, state.pixel_pseudo_labels.clone())?;
        let stage1_map = LabelMap::new(h, w, stage1_pixels)?;
        let provenance_codes: Vec<u16> = seg
            .assignment
            .iter()
            .map(|&r| match state.provenance[r as usize] {
                easlp::Provenance::Majority => 1,
                easlp::Provenance::Similarity => 2,
                easlp::Provenance::Corrected => 3,
            })
            .collect();
        let provenance_map = LabelMap::new(h, w, provenance_codes)?;
        write_labels(&stage1_map, &args.out.join("stage1.labels"))?;
        write_labels(&stage2_map, &args.out.join("stage2.labels"))?;
        write_labels(&provenance_map, &args.out.join("provenance.labels"))?;
    }
    write_json(&report, &args.out.join("easlp_report.json"))?;
    write_json(&params, &args.out.join("run.json"))?;
    println!(
        "stage-1 accuracy {:.4}, stage-2 accuracy {:.4} over {} regions",
        report.stage1_pixel_accuracy, report.stage2_pixel_accuracy, report.num_regions
    );
    Ok(())
}

fn load_base_config(path: &Option<PathBuf>) -> Result<ExperimentConfig> {
    match path {
        Some(path) => load_config(path),
        None => Ok(ExperimentConfig::default()),
    }
}

fn apply_common_overrides(
    config: &mut ExperimentConfig,
    seed: Option<u64>,
    epochs: Option<usize>,
    repeats: Option<usize>,
) {
    if let Some(seed) = seed {
        config.seed = seed;
    }
    if let Some(epochs) = epochs {
        config.epochs = epochs;
    }
    if let Some(repeats) = repeats {
        config.repeats = repeats;
    }
}

/// Parses a comma-separated list of numbers.
pub fn parse_values(text: &str) -> Result<Vec<f64>> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse::<f64>().map_err(|_| {
                Error::InvalidConfig(format!("cannot parse sweep value: {s:?}"))
            })
        })
        .collect()
}

fn write_experiment_artifacts(
    out: &Path,
    config: &ExperimentConfig,
    output: &trainer::ExperimentOutput,
) -> Result<()> {
    save_config(config, &out.join("run.json"))?;
    write_json(&output.report, &out.join("metrics.json"))?;
    for (r, outcome) in output.outcomes.iter().enumerate() {
        trainer::write_epoch_log(&outcome.epoch_log, &out.join(format!("train_log_{r}.csv")))?;
        save_checkpoint(
            &out.join(format!("checkpoint_{r}.bin")),
            &outcome.model,
            &outcome.featurizer,
            config.epochs,
            outcome.run_seed,
        )?;
    }
    Ok(())
}

fn cmd_train(args: TrainArgs) -> Result<()> {
    require_dir(&args.out)?;
    let mut config = load_base_config(&args.config)?;
    apply_common_overrides(&mut config, args.seed, args.epochs, args.repeats);
    if let Some(v) = args.labels_per_class {
        config.labels_per_class = v;
    }
    if let Some(name) = &args.ablate {
        let variant = PipelineVariant::from_name(name).ok_or_else(|| {
            Error::InvalidConfig(format!(
                "unknown ablation variant {name:?}; expected one of full, no-easlp, no-dhp, no-atsc, supervised-only"
            ))
        })?;
        config = variant.apply(&config);
    }
    config.validate()?;

    match (&args.sweep, &args.values) {
        (Some(param_name), Some(values_text)) => {
            let param = SweepParam::from_name(param_name).ok_or_else(|| {
                Error::InvalidConfig(format!(
                    "unknown sweep parameter {param_name:?}; expected one of alpha-max, alpha-min, l-min, l-max, labels-per-class"
                ))
            })?;
            let values = parse_values(values_text)?;
            run_and_write_sweep(&args.out, &config, param, &values)
        }
        (Some(_), None) => Err(Error::InvalidConfig(
            "--sweep requires --values".into(),
        )),
        (None, Some(_)) => Err(Error::InvalidConfig(
            "--values requires --sweep".into(),
        )),
        (None, None) => {
            let output = trainer::run_experiment(&config)?;
            write_experiment_artifacts(&args.out, &config, &output)?;
            println!(
                "mean OA {:.4} (std {:.4}) over {} repeats",
                output.report.aggregate.mean_oa,
                output.report.aggregate.std_oa,
                config.repeats
            );
            Ok(())
        }
    }
}

/// ablation.json schema.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AblationSummary {
    pub variants: Vec<VariantResult>,
    /// For each non-full variant: repeats where the full pipeline's OA is
    /// at least as high, out of the total.
    pub paired_oa_wins_vs_full: Vec<PairedWins>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VariantResult {
    pub name: String,
    pub report: ExperimentReport,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PairedWins {
    pub name: String,
    pub full_wins: usize,
    pub repeats: usize,
}

/// Counts paired repeats where the full run's OA is >= the variant's.
pub fn paired_wins(full: &ExperimentReport, variant: &ExperimentReport) -> usize {
    full.runs
        .iter()
        .zip(&variant.runs)
        .filter(|(f, v)| f.oa >= v.oa)
        .count()
}

fn cmd_ablate(args: AblateArgs) -> Result<()> {
    require_dir(&args.out)?;
    let mut config = load_base_config(&args.config)?;
    apply_common_overrides(&mut config, args.seed, args.epochs, args.repeats);
    config.validate()?;
    let variants: Vec<PipelineVariant> = match &args.variants {
        None => PipelineVariant::ALL.to_vec(),
        Some(list) => list
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(|name| {
                PipelineVariant::from_name(name).ok_or_else(|| {
                    Error::InvalidConfig(format!("unknown ablation variant {name:?}"))
                })
            })
            .collect::<Result<_>>()?,
    };

    let results = trainer::run_ablation(&config, &variants)?;
    let full = results
        .iter()
        .find(|(v, _)| *v == PipelineVariant::Full)
        .map(|(_, o)| o.report.clone());
    let summary = AblationSummary {
        variants: results
            .iter()
            .map(|(v, o)| VariantResult {
                name: v.name().to_string(),
                report: o.report.clone(),
            })
            .collect(),
        paired_oa_wins_vs_full: match &full {
            None => Vec::new(),
            Some(full_report) => results
                .iter()
                .filter(|(v, _)| *v != PipelineVariant::Full)
                .map(|(v, o)| PairedWins {
                    name: v.name().to_string(),
                    full_wins: paired_wins(full_report, &o.report),
                    repeats: full_report.runs.len().min(o.report.runs.len()),
                })
                .collect(),
        },
    };
    save_config(&config, &args.out.join("run.json"))?;
    write_json(&summary, &args.out.join("ablation.json"))?;
    for (variant, output) in &results {
        println!(
            "{:<16} mean OA {:.4} (std {:.4})",
            variant.name(),
            output.report.aggregate.mean_oa,
            output.report.aggregate.std_oa
        );
    }
    Ok(())
}

/// sweep.json schema.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepSummary {
    pub param: String,
    pub entries: Vec<SweepEntry>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepEntry {
    pub value: f64,
    pub report: ExperimentReport,
}

fn run_and_write_sweep(
    out: &Path,
    config: &ExperimentConfig,
    param: SweepParam,
    values: &[f64],
) -> Result<()> {
    let results = trainer::run_sweep(config, param, values)?;
    let summary = SweepSummary {
        param: param.name().to_string(),
        entries: results
            .iter()
            .map(|(value, output)| SweepEntry {
                value: *value,
                report: output.report.clone(),
            })
            .collect(),
    };
    save_config(config, &out.join("run.json"))?;
    write_json(&summary, &out.join("sweep.json"))?;
    for entry in &summary.entries {
        println!(
            "{} = {:<8} mean OA {:.4}",
            summary.param, entry.value, entry.report.aggregate.mean_oa
        );
    }
    Ok(())
}

fn cmd_sweep(args: SweepArgs) -> Result<()> {
    require_dir(&args.out)?;
    let mut config = load_base_config(&args.config)?;
    apply_common_overrides(&mut config, args.seed, args.epochs, args.repeats);
    config.validate()?;
    let param = SweepParam::from_name(&args.param).ok_or_else(|| {
        Error::InvalidConfig(format!(
            "unknown sweep parameter {:?}; expected one of alpha-max, alpha-min, l-min, l-max, labels-per-class",
            args.param
        ))
    })?;
    let values = parse_values(&args.values)?;
    run_and_write_sweep(&args.out, &config, param, &values)
}

/// run.json of the eval subcommand.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EvalParams {
    pub checkpoint: PathBuf,
    pub cube: PathBuf,
    pub labels: PathBuf,
    pub per_class: usize,
    pub seed: u64,
}

fn cmd_eval(args: EvalArgs) -> Result<()> {
    require_dir(&args.out)?;
    let checkpoint = load_checkpoint(&args.checkpoint)?;
    let cube = read_cube(&args.cube)?;
    let truth = read_labels(&args.labels)?;
    let norm = normalize_cube(&cube)?;

    let test_pixels: Vec<(usize, u16)> = if args.per_class == 0 {
        truth.labeled_pixels()
    } else {
        let mut rng = SeededRng::new(args.seed).derive(0x5711);
        split_train_test(&truth, args.per_class, &mut rng)?.1
    };
    let report: MetricsReport = evaluate(
        &checkpoint.model,
        &checkpoint.featurizer,
        &norm,
        &test_pixels,
    )?;
    write_json(&report, &args.out.join("eval.json"))?;
    write_json(
        &EvalParams {
            checkpoint: args.checkpoint.clone(),
            cube: args.cube.clone(),
            labels: args.labels.clone(),
            per_class: args.per_class,
            seed: args.seed,
        },
        &args.out.join("run.json"),
    )?;
    println!(
        "OA {:.4}, AA {:.4}, kappa {:.4} on {} pixels",
        report.oa,
        report.aa,
        report.kappa,
        test_pixels.len()
    );
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn value_lists_parse_and_reject_garbage() {
        assert_eq!(parse_values("0.2,0.3, 0.4").unwrap(), vec![0.2, 0.3, 0.4]);
        assert_eq!(parse_values("5").unwrap(), vec![5.0]);
        assert!(parse_values("0.2,x").is_err());
    }

    #[test]
    fn paired_wins_counts_ties_for_the_full_model() {
        let report = |oas: &[f64]| ExperimentReport {
            runs: oas
                .iter()
                .map(|&oa| MetricsReport {
                    oa,
                    aa: oa,
                    kappa: 0.0,
                    per_class: vec![],
                })
                .collect(),
            aggregate: crate::trainer::AggregateMetrics::over(
                &oas.iter()
                    .map(|&oa| MetricsReport {
                        oa,
                        aa: oa,
                        kappa: 0.0,
                        per_class: vec![],
                    })
                    .collect::<Vec<_>>(),
            ),
        };
        let full = report(&[0.9, 0.8, 0.7]);
        let variant = report(&[0.85, 0.8, 0.75]);
        assert_eq!(paired_wins(&full, &variant), 2);
    }

    #[test]
    fn cli_parses_every_subcommand() {
        Cli::try_parse_from(["drepl", "gen-scene", "--out", "/tmp", "--seed", "7"]).unwrap();
        Cli::try_parse_from([
            "drepl", "easlp", "--cube", "c.hsi", "--labels", "c.labels", "--out", "/tmp",
        ])
        .unwrap();
        Cli::try_parse_from([
            "drepl",
            "train",
            "--out",
            "/tmp",
            "--epochs",
            "5",
            "--ablate",
            "no-dhp",
        ])
        .unwrap();
        Cli::try_parse_from(["drepl", "ablate", "--out", "/tmp", "--variants", "full,no-dhp"])
            .unwrap();
        Cli::try_parse_from([
            "drepl",
            "sweep",
            "--out",
            "/tmp",
            "--param",
            "alpha-max",
            "--values",
            "0.2,0.4",
        ])
        .unwrap();
        Cli::try_parse_from([
            "drepl",
            "eval",
            "--checkpoint",
            "m.bin",
            "--cube",
            "c.hsi",
            "--labels",
            "c.labels",
            "--out",
            "/tmp",
        ])
        .unwrap();
        assert!(Cli::try_parse_from(["drepl", "nonsense"]).is_err());
    }
}
