//! Watch prediction-history fusion react to one flip-flopping sample.
//!
//! The sample's raw prediction oscillates between two classes for the first
//! half of training and then settles. Fusing each prediction with the
//! history queue's class frequencies dampens confidence while the stream is
//! unstable — the queue is split, so the blend pulls the peak down — and
//! boosts it once the queue agrees with the model. The count gap, the
//! stability score the gating module reads off the same queue, stays near
//! zero through the oscillation and climbs after the consensus forms.
//!
//!     cargo run --example history_fusion

use drepl::atsc;
use drepl::dhp::{
    alpha_at, fuse, history_distribution, queue_length, record_prediction, DhpSchedule,
    HistoryQueue, PredictionDistribution,
};
use drepl::hsicore::SeededRng;

fn main() -> drepl::Result<()> {
    let epochs = 40;
    let sched = DhpSchedule::new(5, 20, 0.1, 0.5, 4, epochs)?;
    let mut queue = HistoryQueue::new(3);
    let mut rng = SeededRng::new(123);

    println!("epoch  cap  alpha  raw -> fused   conf raw  fused    gap");
    for t in 0..epochs {
        // First half: the model flips between classes 1 and 2, confidently
        // wrong half the time. From epoch 22 it locks onto class 2.
        let favored = if t < 22 { 1 + t % 2 } else { 2 };
        let mut probs = vec![0.1, 0.1, 0.1];
        probs[favored - 1] = 0.8;
        for p in probs.iter_mut() {
            *p += rng.next_f64() * 0.02;
        }
        let sum: f64 = probs.iter().sum();
        let current = PredictionDistribution::new(probs.into_iter().map(|p| p / sum).collect())?;

        let alpha = alpha_at(t, &sched);
        let fused = if queue.is_empty() || alpha == 0.0 {
            current.clone()
        } else {
            fuse(&current, &history_distribution(&queue)?, alpha)
        };

        record_prediction(&mut queue, current.argmax_class(), t, &sched);

        if t % 3 == 0 || t == epochs - 1 {
            println!(
                "{t:>5}  {:>3}  {alpha:>5.2}      {} -> {}        {:.3}  {:.3}  {:>5}",
                queue_length(t, &sched),
                current.argmax_class(),
                fused.argmax_class(),
                atsc::confidence(&current),
                atsc::confidence(&fused),
                atsc::count_gap(&queue),
            );
        }
    }

    println!(
        "\nqueue after training: {} entries, per-class counts {:?}",
        queue.len(),
        queue.class_counts()
    );
    Ok(())
}
