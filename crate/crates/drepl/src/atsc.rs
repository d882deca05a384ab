//! Adaptive tripartite sample categorization.
//!
//! Each unlabeled sample is scored twice: by the confidence of its fused
//! prediction (largest probability) and by a count gap measuring how stable
//! its recent predictions are (most-frequent minus second-most-frequent
//! class count in its history queue). Two running thresholds split the
//! (confidence, gap) plane into three categories:
//!
//! * **Easy**: confident and stable; trained with a hard pseudo-label.
//! * **Hard**: neither confident nor stable; excluded from the unlabeled loss.
//! * **Ambiguous**: everything in between; trained with a soft consistency
//!   loss only.
//!
//! The thresholds follow the batch means by exponential moving average, so
//! the split adapts as the model sharpens instead of relying on a fixed
//! confidence cutoff.

use crate::dhp::{HistoryQueue, PredictionDistribution};
use crate::error::{Error, Result};

/// Running thresholds for the confidence/gap plane.
#[derive(Debug, Clone, PartialEq)]
pub struct ThresholdState {
    /// Confidence threshold in `[0, 1]`.
    pub tau_conf: f64,
    /// Count-gap threshold, non-negative.
    pub tau_gap: f64,
    /// EMA momentum in `[0, 1]`; larger keeps more of the old threshold.
    pub momentum: f64,
}

impl ThresholdState {
    /// Validates ranges and wraps the state.
    pub fn new(tau_conf: f64, tau_gap: f64, momentum: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&tau_conf) {
            return Err(Error::InvalidConfig(format!(
                "tau_conf must lie in [0, 1], got {tau_conf}"
            )));
        }
        if !(tau_gap >= 0.0) {
            return Err(Error::InvalidConfig(format!(
                "tau_gap must be non-negative, got {tau_gap}"
            )));
        }
        if !(0.0..=1.0).contains(&momentum) {
            return Err(Error::InvalidConfig(format!(
                "momentum must lie in [0, 1], got {momentum}"
            )));
        }
        Ok(ThresholdState {
            tau_conf,
            tau_gap,
            momentum,
        })
    }

    /// Defaults: confidence 0.9, gap of a quarter of the initial queue
    /// capacity, momentum 0.99.
    pub fn with_defaults(initial_queue_capacity: usize) -> Self {
        ThresholdState::new(0.9, initial_queue_capacity as f64 / 4.0, 0.99)
            .expect("default thresholds are valid")
    }
}

/// The three training roles a sample can take.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SampleCategory {
    Easy,
    Ambiguous,
    Hard,
}

/// Stability score: most-frequent count minus second-most-frequent count in
/// the queue. With fewer than two distinct classes on record the runner-up
/// count is zero, so a unanimous queue scores its full length and an empty
/// queue scores zero.
pub fn count_gap(queue: &HistoryQueue) -> u32 {
    let mut top = 0u32;
    let mut second = 0u32;
    for &c in queue.class_counts() {
        if c > top {
            second = top;
            top = c;
        } else if c > second {
            second = c;
        }
    }
    top - second
}

/// Confidence of a prediction: its largest probability.
pub fn confidence(p: &PredictionDistribution) -> f64 {
    p.probabilities().iter().copied().fold(0.0, f64::max)
}

/// Places one sample in the confidence/gap plane.
///
/// Easy requires both scores at or above their thresholds; Hard requires
/// both strictly below; the two mixed quadrants are Ambiguous. Raising
/// either score never demotes a sample.
pub fn categorize(conf: f64, gap: f64, thresholds: &ThresholdState) -> SampleCategory {
    let confident = conf >= thresholds.tau_conf;
    let stable = gap >= thresholds.tau_gap;
    match (confident, stable) {
        (true, true) => SampleCategory::Easy,
        (false, false) => SampleCategory::Hard,
        _ => SampleCategory::Ambiguous,
    }
}

/// Moves both thresholds toward their batch means:
/// `tau <- momentum * tau + (1 - momentum) * mean(batch)`.
///
/// Both slices must be non-empty and the same length (one entry per sample).
pub fn update_thresholds(
    thresholds: &mut ThresholdState,
    confidences: &[f64],
    gaps: &[f64],
) -> Result<()> {
    if confidences.is_empty() || gaps.is_empty() {
        return Err(Error::EmptyBatch);
    }
    if confidences.len() != gaps.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} confidences vs {} gaps",
            confidences.len(),
            gaps.len()
        )));
    }
    let m = thresholds.momentum;
    let mean_conf = confidences.iter().sum::<f64>() / confidences.len() as f64;
    let mean_gap = gaps.iter().sum::<f64>() / gaps.len() as f64;
    thresholds.tau_conf = m * thresholds.tau_conf + (1.0 - m) * mean_conf;
    thresholds.tau_gap = m * thresholds.tau_gap + (1.0 - m) * mean_gap;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dhp::HistoryQueue;

    fn queue_with(classes: &[u16], k: usize) -> HistoryQueue {
        let mut q = HistoryQueue::new(k);
        for &c in classes {
            q.record(c, classes.len().max(1));
        }
        q
    }

    #[test]
    fn count_gap_hand_cases() {
        assert_eq!(count_gap(&queue_with(&[], 3)), 0);
        // Unanimous: gap equals the queue length.
        assert_eq!(count_gap(&queue_with(&[2; 7], 3)), 7);
        // {1: 3, 2: 2, 3: 1} -> 3 - 2 = 1.
        assert_eq!(count_gap(&queue_with(&[1, 1, 1, 2, 2, 3], 3)), 1);
        // Perfect tie -> 0.
        assert_eq!(count_gap(&queue_with(&[1, 2, 1, 2], 3)), 0);
    }

    #[test]
    fn confidence_is_the_peak_probability() {
        let d = PredictionDistribution::new(vec![0.2, 0.5, 0.3]).unwrap();
        assert_eq!(confidence(&d), 0.5);
    }

    #[test]
    fn categorize_covers_all_four_quadrants() {
        let th = ThresholdState::new(0.8, 5.0, 0.99).unwrap();
        assert_eq!(categorize(0.9, 7.0, &th), SampleCategory::Easy);
        assert_eq!(categorize(0.7, 2.0, &th), SampleCategory::Hard);
        assert_eq!(categorize(0.9, 2.0, &th), SampleCategory::Ambiguous);
        assert_eq!(categorize(0.7, 7.0, &th), SampleCategory::Ambiguous);
        // Boundary values count as meeting the threshold.
        assert_eq!(categorize(0.8, 5.0, &th), SampleCategory::Easy);
    }

    #[test]
    fn raising_scores_never_demotes() {
        let th = ThresholdState::new(0.8, 5.0, 0.99).unwrap();
        let rank = |c: SampleCategory| match c {
            SampleCategory::Hard => 0,
            SampleCategory::Ambiguous => 1,
            SampleCategory::Easy => 2,
        };
        let grid = [0.0, 0.5, 0.79, 0.8, 0.95, 1.0];
        let gaps = [0.0, 2.0, 4.9, 5.0, 9.0];
        for (i, &c1) in grid.iter().enumerate() {
            for &c2 in &grid[i..] {
                for (j, &g1) in gaps.iter().enumerate() {
                    for &g2 in &gaps[j..] {
                        assert!(
                            rank(categorize(c2, g2, &th)) >= rank(categorize(c1, g1, &th)),
                            "({c1},{g1}) -> ({c2},{g2})"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn ema_update_matches_hand_computation() {
        // 0.99 * 0.8 + 0.01 * 0.6 = 0.798.
        let mut th = ThresholdState::new(0.8, 10.0, 0.99).unwrap();
        update_thresholds(&mut th, &[0.6], &[20.0]).unwrap();
        assert!((th.tau_conf - 0.798).abs() < 1e-12);
        assert!((th.tau_gap - 10.1).abs() < 1e-12);
    }

    #[test]
    fn ema_stays_within_the_hull_of_inputs() {
        let mut th = ThresholdState::with_defaults(50);
        for step in 0..1000 {
            let conf = 0.3 + 0.6 * ((step % 7) as f64 / 6.0);
            let gap = (step % 11) as f64;
            update_thresholds(&mut th, &[conf, conf * 0.9], &[gap, gap + 1.0]).unwrap();
            assert!((0.0..=1.0).contains(&th.tau_conf));
            assert!(th.tau_gap >= 0.0 && th.tau_gap <= 50.0);
        }
        // After many updates the thresholds live inside the observed ranges.
        assert!(th.tau_conf < 0.9 && th.tau_conf > 0.25);
        assert!(th.tau_gap < 12.5);
    }

    #[test]
    fn empty_batch_update_is_rejected() {
        let mut th = ThresholdState::with_defaults(50);
        assert!(matches!(
            update_thresholds(&mut th, &[], &[]),
            Err(Error::EmptyBatch)
        ));
    }

    #[test]
    fn momentum_one_freezes_thresholds() {
        let mut th = ThresholdState::new(0.9, 12.5, 1.0).unwrap();
        update_thresholds(&mut th, &[0.1], &[40.0]).unwrap();
        assert_eq!(th.tau_conf, 0.9);
        assert_eq!(th.tau_gap, 12.5);
    }

    #[test]
    fn threshold_validation_rejects_bad_ranges() {
        assert!(ThresholdState::new(1.1, 1.0, 0.9).is_err());
        assert!(ThresholdState::new(0.9, -1.0, 0.9).is_err());
        assert!(ThresholdState::new(0.9, 1.0, 1.5).is_err());
    }
}
