//! Compare the full pipeline against its one-module-off variants.
//!
//! Every variant trains on the same scene with the same per-repeat seeds,
//! so each repeat is a paired comparison: identical data, identical splits,
//! only the module switches differ. Prints mean accuracy per variant and
//! how often the full pipeline wins the pairing.
//!
//! The scene is hard enough (eight overlapping classes, heavy noise) for
//! the unlabeled machinery to matter, so this example trains fifteen small
//! models and takes around half a minute. Expect clear gaps for gating and
//! for unlabeled data overall, and thin ones for the pool and fusion — at
//! three repeats those are direction, not significance.
//!
//!     cargo run --example ablation

use drepl::trainer::{run_ablation, ExperimentConfig, PipelineVariant};

fn main() -> drepl::Result<()> {
    let mut config = ExperimentConfig::default();
    config.scene.num_classes = 8;
    config.scene.region_granularity = 512.0;
    config.scene.signature_separation = 0.5;
    config.scene.noise_sigma = 0.15;
    config.compactness = 20.0;
    config.patch_size = 1;
    config.epochs = 50;
    config.batch_size = 128;
    config.sigma_s = 0.15;
    config.lambda_max = 1.0;
    config.pseudo_per_class = 300;
    config.queue.warmup = Some(35);
    config.repeats = 3;
    config.seed = 5;

    let results = run_ablation(&config, &PipelineVariant::ALL)?;
    let full_runs: Vec<f64> = results
        .iter()
        .find(|(v, _)| *v == PipelineVariant::Full)
        .map(|(_, out)| out.report.runs.iter().map(|r| r.oa).collect())
        .expect("grid includes the full pipeline");

    println!("variant          mean OA   std      full wins pairing");
    for (variant, output) in &results {
        let agg = &output.report.aggregate;
        if *variant == PipelineVariant::Full {
            println!("{:<15}  {:.4}    {:.4}   -", variant.name(), agg.mean_oa, agg.std_oa);
            continue;
        }
        let wins = output
            .report
            .runs
            .iter()
            .zip(&full_runs)
            .filter(|(theirs, full)| **full >= theirs.oa)
            .count();
        println!(
            "{:<15}  {:.4}    {:.4}   {wins}/{}",
            variant.name(),
            agg.mean_oa,
            agg.std_oa,
            config.repeats,
        );
    }
    Ok(())
}
