//! End-to-end runs of the `drepl` binary: every subcommand against real
//! files in a temporary directory, checking artifacts, reloadability, and
//! error behavior.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use drepl::cli::{AblationSummary, EaslpReport, SweepSummary};
use drepl::hsicore::{read_cube, read_labels};
use drepl::trainer::{ExperimentConfig, MetricsReport};

fn drepl(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_drepl"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary launches")
}

fn assert_success(out: &Output, context: &str) {
    assert!(
        out.status.success(),
        "{context} failed.\nstdout: {}\nstderr: {}",
        String::from_utf8_lossy(&out.stdout),
        String::from_utf8_lossy(&out.stderr)
    );
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> T {
    let text = std::fs::read_to_string(path)
        .unwrap_or_else(|e| panic!("reading {}: {e}", path.display()));
    serde_json::from_str(&text).unwrap_or_else(|e| panic!("parsing {}: {e}", path.display()))
}

/// Generates a small scene and returns the cube/labels paths.
fn generate_scene(dir: &Path, out_name: &str, seed: u64) -> (PathBuf, PathBuf) {
    let out = dir.join(out_name);
    std::fs::create_dir(&out).unwrap();
    let run = drepl(
        &[
            "gen-scene",
            "--out",
            out.to_str().unwrap(),
            "--seed",
            &seed.to_string(),
            "--height",
            "32",
            "--width",
            "32",
            "--bands",
            "8",
            "--classes",
            "4",
            "--granularity",
            "128",
            "--noise",
            "0.05",
        ],
        dir,
    );
    assert_success(&run, "gen-scene");
    (out.join("scene.hsi"), out.join("scene.labels"))
}

#[test]
fn gen_scene_artifacts_reload_and_reproduce() {
    let dir = tempfile::tempdir().unwrap();
    let (cube_path, labels_path) = generate_scene(dir.path(), "scene", 7);

    let cube = read_cube(&cube_path).expect("cube reloads");
    let labels = read_labels(&labels_path).expect("labels reload");
    assert_eq!((cube.height(), cube.width(), cube.bands()), (32, 32, 8));
    assert_eq!((labels.height(), labels.width()), (32, 32));
    assert!(labels.labels().iter().all(|&c| (1..=4).contains(&c)));

    // Re-running from the echoed run.json reproduces the files bit for bit.
    let again = dir.path().join("again");
    std::fs::create_dir(&again).unwrap();
    let rerun = drepl(
        &[
            "gen-scene",
            "--out",
            again.to_str().unwrap(),
            "--config",
            dir.path().join("scene/run.json").to_str().unwrap(),
        ],
        dir.path(),
    );
    assert_success(&rerun, "gen-scene from run.json");
    for name in ["scene.hsi", "scene.labels"] {
        let a = std::fs::read(dir.path().join("scene").join(name)).unwrap();
        let b = std::fs::read(again.join(name)).unwrap();
        assert_eq!(a, b, "{name} differs after regeneration");
    }
}

#[test]
fn easlp_reports_plausible_accuracies() {
    let dir = tempfile::tempdir().unwrap();
    let (cube_path, labels_path) = generate_scene(dir.path(), "scene", 11);
    let out = dir.path().join("easlp");
    std::fs::create_dir(&out).unwrap();
    let run = drepl(
        &[
            "easlp",
            "--cube",
            cube_path.to_str().unwrap(),
            "--labels",
            labels_path.to_str().unwrap(),
            "--out",
            out.to_str().unwrap(),
            "--seed",
            "11",
            "--dump-easlp-stages",
        ],
        dir.path(),
    );
    assert_success(&run, "easlp");

    let report: EaslpReport = read_json(&out.join("easlp_report.json"));
    assert!(report.num_regions > 0);
    assert_eq!(
        report.majority_regions + report.similarity_regions + report.corrected_regions,
        report.num_regions,
        "the provenance buckets partition the regions"
    );
    assert!(report.majority_regions > 0, "labeled pixels anchor some regions");
    assert!((0.0..=1.0).contains(&report.stage1_pixel_accuracy));
    assert!((0.5..=1.0).contains(&report.stage2_pixel_accuracy));

    // The dumped rasters reload with the scene's dimensions.
    for name in ["stage1.labels", "stage2.labels", "provenance.labels"] {
        let map = read_labels(&out.join(name)).expect("raster reloads");
        assert_eq!((map.height(), map.width()), (32, 32));
    }
}

/// A small config used by the training-path tests.
fn tiny_config(cube: &Path, labels: &Path) -> ExperimentConfig {
    let mut cfg = ExperimentConfig::default();
    cfg.cube_path = Some(cube.to_path_buf());
    cfg.labels_path = Some(labels.to_path_buf());
    cfg.labels_per_class = 8;
    cfg.patch_size = 1;
    cfg.epochs = 4;
    cfg.repeats = 1;
    cfg.seed = 9;
    cfg.pseudo_per_class = 40;
    cfg
}

#[test]
fn train_then_eval_checkpoint_roundtrip() {
    let dir = tempfile::tempdir().unwrap();
    let (cube_path, labels_path) = generate_scene(dir.path(), "scene", 3);
    let cfg = tiny_config(&cube_path, &labels_path);
    let cfg_path = dir.path().join("config.json");
    drepl::trainer::save_config(&cfg, &cfg_path).unwrap();

    let out = dir.path().join("train");
    std::fs::create_dir(&out).unwrap();
    let train = drepl(
        &[
            "train",
            "--config",
            cfg_path.to_str().unwrap(),
            "--out",
            out.to_str().unwrap(),
        ],
        dir.path(),
    );
    assert_success(&train, "train");
    for name in ["run.json", "metrics.json", "train_log_0.csv", "checkpoint_0.bin"] {
        assert!(out.join(name).is_file(), "missing artifact {name}");
    }

    // The echoed run.json is a loadable config equal to what was trained.
    let echoed: ExperimentConfig = read_json(&out.join("run.json"));
    assert_eq!(echoed, cfg);

    let eval_out = dir.path().join("eval");
    std::fs::create_dir(&eval_out).unwrap();
    let eval = drepl(
        &[
            "eval",
            "--checkpoint",
            out.join("checkpoint_0.bin").to_str().unwrap(),
            "--cube",
            cube_path.to_str().unwrap(),
            "--labels",
            labels_path.to_str().unwrap(),
            "--out",
            eval_out.to_str().unwrap(),
        ],
        dir.path(),
    );
    assert_success(&eval, "eval");
    let metrics: MetricsReport = read_json(&eval_out.join("eval.json"));
    assert!((0.0..=1.0).contains(&metrics.oa));
    assert!((-1.0..=1.0).contains(&metrics.kappa));
    assert_eq!(metrics.per_class.len(), 4);
}

#[test]
fn ablate_writes_paired_summary() {
    let dir = tempfile::tempdir().unwrap();
    let (cube_path, labels_path) = generate_scene(dir.path(), "scene", 5);
    let mut cfg = tiny_config(&cube_path, &labels_path);
    cfg.repeats = 2;
    let cfg_path = dir.path().join("config.json");
    drepl::trainer::save_config(&cfg, &cfg_path).unwrap();

    let out = dir.path().join("ablate");
    std::fs::create_dir(&out).unwrap();
    let run = drepl(
        &[
            "ablate",
            "--config",
            cfg_path.to_str().unwrap(),
            "--out",
            out.to_str().unwrap(),
            "--variants",
            "full,supervised-only",
        ],
        dir.path(),
    );
    assert_success(&run, "ablate");
    let summary: AblationSummary = read_json(&out.join("ablation.json"));
    assert_eq!(summary.variants.len(), 2);
    assert_eq!(summary.variants[0].name, "full");
    assert_eq!(summary.paired_oa_wins_vs_full.len(), 1);
    let wins = &summary.paired_oa_wins_vs_full[0];
    assert_eq!(wins.repeats, 2);
    assert!(wins.full_wins <= 2);
    for v in &summary.variants {
        assert_eq!(v.report.runs.len(), 2);
    }
}

#[test]
fn sweep_writes_one_entry_per_value() {
    let dir = tempfile::tempdir().unwrap();
    let (cube_path, labels_path) = generate_scene(dir.path(), "scene", 2);
    let cfg = tiny_config(&cube_path, &labels_path);
    let cfg_path = dir.path().join("config.json");
    drepl::trainer::save_config(&cfg, &cfg_path).unwrap();

    let out = dir.path().join("sweep");
    std::fs::create_dir(&out).unwrap();
    let run = drepl(
        &[
            "sweep",
            "--config",
            cfg_path.to_str().unwrap(),
            "--out",
            out.to_str().unwrap(),
            "--param",
            "alpha-max",
            "--values",
            "0.2,0.6",
        ],
        dir.path(),
    );
    assert_success(&run, "sweep");
    let summary: SweepSummary = read_json(&out.join("sweep.json"));
    assert_eq!(summary.param, "alpha-max");
    assert_eq!(summary.entries.len(), 2);
    assert_eq!(summary.entries[0].value, 0.2);
    assert_eq!(summary.entries[1].value, 0.6);
}

#[test]
fn missing_output_directory_is_a_clean_error() {
    let dir = tempfile::tempdir().unwrap();
    let gone = dir.path().join("does-not-exist");
    let run = drepl(
        &["train", "--out", gone.to_str().unwrap(), "--epochs", "1"],
        dir.path(),
    );
    assert!(!run.status.success(), "train into a missing directory must fail");
    let stderr = String::from_utf8_lossy(&run.stderr);
    assert!(
        stderr.contains("does-not-exist"),
        "error should name the missing directory, got: {stderr}"
    );
}

#[test]
fn unknown_ablation_variant_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    std::fs::create_dir(&out).unwrap();
    let run = drepl(
        &[
            "train",
            "--out",
            out.to_str().unwrap(),
            "--ablate",
            "no-such-variant",
        ],
        dir.path(),
    );
    assert!(!run.status.success());
    let stderr = String::from_utf8_lossy(&run.stderr);
    assert!(stderr.contains("no-such-variant"), "got: {stderr}");
}
