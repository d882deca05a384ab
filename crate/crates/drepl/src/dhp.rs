//! Dynamic history-fused prediction.
//!
//! Each unlabeled sample owns a bounded FIFO of its past predicted classes.
//! The queue capacity grows geometrically from `l_min` to `l_max` over
//! training, and the sample's current predicted distribution is blended with
//! the queue's empirical class distribution under a weight that ramps from
//! `alpha_min` to `alpha_max` after a warm-up. Early on the model is noisy,
//! so history counts for little and stays short; later it counts for more
//! and remembers longer.

use std::collections::VecDeque;

use crate::error::{Error, Result};

/// Queue-capacity and fusion-weight schedules.
#[derive(Debug, Clone, PartialEq)]
pub struct DhpSchedule {
    /// Queue capacity at epoch 0 (>= 1).
    pub l_min: usize,
    /// Queue capacity at the final epoch (>= l_min).
    pub l_max: usize,
    /// Fusion weight right after warm-up.
    pub alpha_min: f64,
    /// Fusion weight ceiling.
    pub alpha_max: f64,
    /// Warm-up epochs during which history is ignored entirely.
    pub warmup: usize,
    /// Total training epochs the schedules stretch over.
    pub total_epochs: usize,
}

impl DhpSchedule {
    /// Validates ranges: `1 <= l_min <= l_max`, `0 <= alpha_min <= alpha_max <= 1`,
    /// `warmup < total_epochs`.
    pub fn new(
        l_min: usize,
        l_max: usize,
        alpha_min: f64,
        alpha_max: f64,
        warmup: usize,
        total_epochs: usize,
    ) -> Result<Self> {
        if l_min < 1 || l_max < l_min {
            return Err(Error::InvalidConfig(format!(
                "queue bounds must satisfy 1 <= l_min <= l_max, got {l_min}..{l_max}"
            )));
        }
        if !(0.0..=1.0).contains(&alpha_min)
            || !(0.0..=1.0).contains(&alpha_max)
            || alpha_min > alpha_max
        {
            return Err(Error::InvalidConfig(format!(
                "fusion weights must satisfy 0 <= alpha_min <= alpha_max <= 1, got {alpha_min}..{alpha_max}"
            )));
        }
        if warmup >= total_epochs {
            return Err(Error::InvalidConfig(format!(
                "warmup ({warmup}) must be shorter than training ({total_epochs} epochs)"
            )));
        }
        Ok(DhpSchedule {
            l_min,
            l_max,
            alpha_min,
            alpha_max,
            warmup,
            total_epochs,
        })
    }

    /// Defaults: capacity 50 growing to 300, weight 0.1 ramping to 0.4,
    /// warm-up one tenth of training.
    pub fn with_defaults(total_epochs: usize) -> Self {
        DhpSchedule::new(50, 300, 0.1, 0.4, total_epochs / 10, total_epochs)
            .expect("default schedule is valid")
    }
}

/// Queue capacity at epoch `t`: `floor(l_min * (l_max / l_min)^(t / T))`.
///
/// Geometric growth spends more epochs at short capacities, where stale
/// predictions would otherwise linger.
pub fn queue_length(t: usize, sched: &DhpSchedule) -> usize {
    let ratio = sched.l_max as f64 / sched.l_min as f64;
    let exponent = t as f64 / sched.total_epochs as f64;
    (sched.l_min as f64 * ratio.powf(exponent)).floor() as usize
}

/// Fusion weight at epoch `t`: zero through the warm-up, then a linear ramp
/// from `alpha_min` to `alpha_max`, clamped at `alpha_max`.
pub fn alpha_at(t: usize, sched: &DhpSchedule) -> f64 {
    if t < sched.warmup {
        return 0.0;
    }
    let progress = (t - sched.warmup) as f64 / (sched.total_epochs - sched.warmup) as f64;
    (sched.alpha_min + (sched.alpha_max - sched.alpha_min) * progress).min(sched.alpha_max)
}

/// A probability vector over classes `1..=K` (index 0 holds class 1).
///
/// Entries are non-negative and sum to 1 within 1e-6; constructors enforce it.
#[derive(Debug, Clone, PartialEq)]
pub struct PredictionDistribution(Vec<f64>);

impl PredictionDistribution {
    /// Validates and wraps a probability vector.
    pub fn new(p: Vec<f64>) -> Result<Self> {
        if p.is_empty() {
            return Err(Error::InvalidDistribution("no classes".into()));
        }
        if p.iter().any(|&v| !(v >= 0.0)) {
            return Err(Error::InvalidDistribution(
                "entries must be non-negative and finite".into(),
            ));
        }
        let sum: f64 = p.iter().sum();
        if (sum - 1.0).abs() > 1e-6 {
            return Err(Error::InvalidDistribution(format!("sums to {sum}")));
        }
        Ok(PredictionDistribution(p))
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.0
    }

    pub fn num_classes(&self) -> usize {
        self.0.len()
    }

    /// Class id (1-based) of the largest probability; lowest id on ties.
    pub fn argmax_class(&self) -> u16 {
        let mut best = 0usize;
        for (i, &p) in self.0.iter().enumerate() {
            if p > self.0[best] {
                best = i;
            }
        }
        best as u16 + 1
    }

    /// Shannon entropy in nats.
    pub fn entropy(&self) -> f64 {
        self.0
            .iter()
            .filter(|&&p| p > 0.0)
            .map(|&p| -p * p.ln())
            .sum()
    }
}

/// Bounded FIFO of predicted class ids with running per-class counts.
#[derive(Debug, Clone)]
pub struct HistoryQueue {
    entries: VecDeque<u16>,
    counts: Vec<u32>,
}

impl HistoryQueue {
    /// An empty queue over classes `1..=num_classes`.
    pub fn new(num_classes: usize) -> Self {
        assert!(num_classes >= 1);
        HistoryQueue {
            entries: VecDeque::new(),
            counts: vec![0; num_classes],
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn num_classes(&self) -> usize {
        self.counts.len()
    }

    /// Occurrence count per class over the current buffer contents.
    pub fn class_counts(&self) -> &[u32] {
        &self.counts
    }

    /// Appends `class_id`, evicting from the front while over `capacity`.
    pub fn record(&mut self, class_id: u16, capacity: usize) {
        assert!(
            class_id >= 1 && usize::from(class_id) <= self.counts.len(),
            "class id {class_id} out of range 1..={}",
            self.counts.len()
        );
        assert!(capacity >= 1, "capacity must be at least 1");
        self.entries.push_back(class_id);
        self.counts[usize::from(class_id) - 1] += 1;
        while self.entries.len() > capacity {
            let evicted = self.entries.pop_front().expect("queue is non-empty");
            self.counts[usize::from(evicted) - 1] -= 1;
        }
    }
}

/// Records a prediction using the capacity the schedule dictates at epoch `t`.
pub fn record_prediction(queue: &mut HistoryQueue, class_id: u16, t: usize, sched: &DhpSchedule) {
    queue.record(class_id, queue_length(t, sched).max(1));
}

/// The queue's empirical class distribution (counts over length).
///
/// Fails with [`Error::EmptyHistory`] before the first recorded prediction.
pub fn history_distribution(queue: &HistoryQueue) -> Result<PredictionDistribution> {
    if queue.is_empty() {
        return Err(Error::EmptyHistory);
    }
    let total = queue.len() as f64;
    PredictionDistribution::new(queue.counts.iter().map(|&c| c as f64 / total).collect())
}

/// Convex blend `(1 - alpha) * current + alpha * history`.
///
/// Both inputs are valid distributions over the same classes, so the result
/// is as well.
pub fn fuse(
    current: &PredictionDistribution,
    history: &PredictionDistribution,
    alpha: f64,
) -> PredictionDistribution {
    assert!((0.0..=1.0).contains(&alpha), "alpha must lie in [0, 1]");
    assert_eq!(
        current.num_classes(),
        history.num_classes(),
        "distributions must cover the same classes"
    );
    PredictionDistribution(
        current
            .0
            .iter()
            .zip(&history.0)
            .map(|(&c, &h)| (1.0 - alpha) * c + alpha * h)
            .collect(),
    )
}
