//! Sweep the history-fusion weight ceiling and watch accuracy respond.
//!
//! Each sweep value re-runs the same small experiment with `alpha_max` set
//! to that value, everything else fixed. A ceiling of `alpha_min` barely
//! lets history in; large ceilings lean hard on it. The sweep harness also
//! accepts `alpha-min`, `l-min`, `l-max`, and `labels-per-class`.
//!
//!     cargo run --example parameter_sweep

use drepl::trainer::{run_sweep, ExperimentConfig, SweepParam};

fn main() -> drepl::Result<()> {
    let mut config = ExperimentConfig::default();
    config.scene.height = 32;
    config.scene.width = 32;
    config.scene.bands = 8;
    config.scene.num_classes = 4;
    config.scene.region_granularity = 128.0;
    config.scene.signature_separation = 0.35;
    config.scene.noise_sigma = 0.1;
    config.labels_per_class = 8;
    config.patch_size = 1;
    config.epochs = 16;
    config.batch_size = 32;
    config.pseudo_per_class = 50;
    config.queue.l_min = 5;
    config.queue.l_max = 40;
    config.queue.warmup = Some(3);
    config.repeats = 3;
    config.seed = 33;

    let values = [0.1, 0.3, 0.5, 0.8];
    let results = run_sweep(&config, SweepParam::AlphaMax, &values)?;

    println!("alpha_max  mean OA   std       per-repeat OA");
    for (value, output) in &results {
        let agg = &output.report.aggregate;
        let runs: Vec<String> = output
            .report
            .runs
            .iter()
            .map(|r| format!("{:.4}", r.oa))
            .collect();
        println!(
            "{value:>9.2}  {:.4}    {:.4}    {}",
            agg.mean_oa,
            agg.std_oa,
            runs.join("  "),
        );
    }
    Ok(())
}
