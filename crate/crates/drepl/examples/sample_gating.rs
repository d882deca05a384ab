//! Gate a synthetic population into easy / ambiguous / hard training roles.
//!
//! Three kinds of samples stream predictions for thirty epochs: stable ones
//! that almost always repeat their class, drifters that start shaky and
//! improve, and noisy ones that flip at random. Each epoch every sample is
//! scored by prediction confidence and by the count gap of its history
//! queue, categorized against the running thresholds, and the thresholds
//! then chase the batch means. The counts show the population sorting
//! itself out as training "progresses".
//!
//!     cargo run --example sample_gating

use drepl::atsc::{
    categorize, confidence, count_gap, update_thresholds, SampleCategory, ThresholdState,
};
use drepl::dhp::{record_prediction, DhpSchedule, HistoryQueue, PredictionDistribution};
use drepl::hsicore::SeededRng;

const CLASSES: usize = 4;
const PER_GROUP: usize = 60;
const EPOCHS: usize = 30;

struct Sample {
    group: &'static str,
    true_class: u16,
    queue: HistoryQueue,
}

/// Chance that this epoch's prediction repeats the sample's own class.
fn stability(group: &str, progress: f64) -> f64 {
    match group {
        "stable" => 0.95,
        "drifting" => 0.4 + 0.5 * progress,
        _ => 1.0 / CLASSES as f64,
    }
}

fn main() -> drepl::Result<()> {
    let sched = DhpSchedule::new(5, 40, 0.1, 0.4, 3, EPOCHS)?;
    // Momentum 0.9 instead of the long-run default so the drift is visible
    // within thirty epochs.
    let mut thresholds = ThresholdState::new(0.9, 1.25, 0.9)?;
    let mut rng = SeededRng::new(77);

    let mut samples: Vec<Sample> = Vec::new();
    for group in ["stable", "drifting", "noisy"] {
        for i in 0..PER_GROUP {
            samples.push(Sample {
                group,
                true_class: (i % CLASSES) as u16 + 1,
                queue: HistoryQueue::new(CLASSES),
            });
        }
    }

    println!("epoch  tau_conf  tau_gap   easy  ambiguous  hard");
    let mut last: Vec<SampleCategory> = Vec::new();
    for t in 0..EPOCHS {
        let progress = t as f64 / (EPOCHS - 1) as f64;
        let mut confs = Vec::with_capacity(samples.len());
        let mut gaps = Vec::with_capacity(samples.len());
        last.clear();

        for sample in samples.iter_mut() {
            let p_repeat = stability(sample.group, progress);
            let predicted = if rng.next_f64() < p_repeat {
                sample.true_class
            } else {
                let mut other = rng.gen_range(CLASSES) as u16 + 1;
                if other == sample.true_class {
                    other = other % CLASSES as u16 + 1;
                }
                other
            };
            // Peakedness tracks stability: confident when the stream is calm.
            let peak = 0.5 + 0.45 * p_repeat;
            let rest = (1.0 - peak) / (CLASSES - 1) as f64;
            let mut probs = vec![rest; CLASSES];
            probs[usize::from(predicted) - 1] = peak;
            let dist = PredictionDistribution::new(probs)?;

            record_prediction(&mut sample.queue, predicted, t, &sched);
            let conf = confidence(&dist);
            let gap = f64::from(count_gap(&sample.queue));
            last.push(categorize(conf, gap, &thresholds));
            confs.push(conf);
            gaps.push(gap);
        }

        if t % 3 == 0 || t == EPOCHS - 1 {
            let count = |c: SampleCategory| last.iter().filter(|&&x| x == c).count();
            println!(
                "{t:>5}  {:>8.4}  {:>7.3}  {:>5}  {:>9}  {:>4}",
                thresholds.tau_conf,
                thresholds.tau_gap,
                count(SampleCategory::Easy),
                count(SampleCategory::Ambiguous),
                count(SampleCategory::Hard),
            );
        }

        update_thresholds(&mut thresholds, &confs, &gaps)?;
    }

    println!("\nfinal epoch by group:");
    for group in ["stable", "drifting", "noisy"] {
        let mut easy = 0;
        let mut ambiguous = 0;
        let mut hard = 0;
        for (sample, category) in samples.iter().zip(&last) {
            if sample.group == group {
                match category {
                    SampleCategory::Easy => easy += 1,
                    SampleCategory::Ambiguous => ambiguous += 1,
                    SampleCategory::Hard => hard += 1,
                }
            }
        }
        println!("  {group:<9} easy {easy:>3}  ambiguous {ambiguous:>3}  hard {hard:>3}");
    }
    Ok(())
}
