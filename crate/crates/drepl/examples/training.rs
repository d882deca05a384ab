//! Train the full pipeline end to end on a small synthetic scene.
//!
//! Runs a few independent repeats, prints each repeat's overall accuracy,
//! average accuracy, and Cohen's kappa, then the aggregate, and finally a
//! slice of the first repeat's epoch log — the same rows the `drepl train`
//! command writes to `train_log_<r>.csv`.
//!
//!     cargo run --example training

use drepl::trainer::{run_experiment, ExperimentConfig};

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
    config.epochs = 20;
    config.batch_size = 32;
    config.pseudo_per_class = 50;
    config.queue.l_min = 5;
    config.queue.l_max = 40;
    config.queue.warmup = Some(4);
    config.repeats = 3;
    config.seed = 11;

    let output = run_experiment(&config)?;

    println!("repeat  seed                  OA      AA      kappa");
    for (r, outcome) in output.outcomes.iter().enumerate() {
        let m = &outcome.report;
        println!(
            "{r:>6}  {:#018x}  {:.4}  {:.4}  {:.4}",
            outcome.run_seed, m.oa, m.aa, m.kappa
        );
    }
    let agg = &output.report.aggregate;
    println!(
        "\naggregate over {} repeats: OA {:.4} +/- {:.4}, AA {:.4} +/- {:.4}, kappa {:.4} +/- {:.4}",
        config.repeats, agg.mean_oa, agg.std_oa, agg.mean_aa, agg.std_aa, agg.mean_kappa, agg.std_kappa,
    );

    let best = output
        .outcomes
        .iter()
        .max_by(|a, b| a.report.oa.total_cmp(&b.report.oa))
        .expect("at least one repeat");
    println!("\nbest repeat per-class accuracy:");
    for (class, acc) in best.report.per_class.iter().enumerate() {
        match acc {
            Some(a) => println!("  class {:>2}: {a:.4}", class + 1),
            None => println!("  class {:>2}: absent from the test split", class + 1),
        }
    }

    println!("\nepoch log of repeat 0 (every fourth epoch):");
    println!("epoch   l_sup   l_easy   l_amb  lambda  alpha   easy/amb/hard   oa_test");
    for record in output.outcomes[0].epoch_log.iter() {
        if record.epoch % 4 == 0 || record.epoch == config.epochs - 1 {
            println!(
                "{:>5}  {:>6.3}  {:>7.3}  {:>6.3}  {:>6.3}  {:>5.2}  {:>5}/{:<4}/{:<4}  {:.4}",
                record.epoch,
                record.l_sup,
                record.l_easy,
                record.l_amb,
                record.lambda_a,
                record.alpha_t,
                record.n_easy,
                record.n_amb,
                record.n_hard,
                record.oa_test,
            );
        }
    }
    Ok(())
}
