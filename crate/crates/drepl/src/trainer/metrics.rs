//! Confusion-matrix classification metrics: overall accuracy, average
//! (per-class) accuracy, and the chance-corrected kappa coefficient.

use crate::error::{Error, Result};
use crate::model::{Mlp, PatchFeaturizer};
use serde::{Deserialize, Serialize};

/// Square confusion matrix over 1-based class ids; rows are the truth,
/// columns the prediction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfusionMatrix {
    num_classes: usize,
    counts: Vec<u64>,
}

impl ConfusionMatrix {
    pub fn new(num_classes: usize) -> Self {
        assert!(num_classes >= 1, "need at least one class");
        ConfusionMatrix {
            num_classes,
            counts: vec![0; num_classes * num_classes],
        }
    }

    /// Builds a matrix directly from per-row counts (tests, reports).
    pub fn from_rows(rows: &[Vec<u64>]) -> Self {
        let k = rows.len();
        assert!(rows.iter().all(|r| r.len() == k), "matrix must be square");
        ConfusionMatrix {
            num_classes: k,
            counts: rows.iter().flatten().copied().collect(),
        }
    }

    pub fn record(&mut self, truth: u16, prediction: u16) {
        assert!(
            truth >= 1 && usize::from(truth) <= self.num_classes,
            "truth class {truth} outside 1..={}",
            self.num_classes
        );
        assert!(
            prediction >= 1 && usize::from(prediction) <= self.num_classes,
            "predicted class {prediction} outside 1..={}",
            self.num_classes
        );
        self.counts
            [(usize::from(truth) - 1) * self.num_classes + usize::from(prediction) - 1] += 1;
    }

    pub fn count(&self, truth: u16, prediction: u16) -> u64 {
        self.counts
            [(usize::from(truth) - 1) * self.num_classes + usize::from(prediction) - 1]
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    fn row_total(&self, class: usize) -> u64 {
        self.counts[class * self.num_classes..(class + 1) * self.num_classes]
            .iter()
            .sum()
    }

    fn col_total(&self, class: usize) -> u64 {
        (0..self.num_classes)
            .map(|r| self.counts[r * self.num_classes + class])
            .sum()
    }

    /// Fraction of correct predictions.
    pub fn overall_accuracy(&self) -> f64 {
        let n = self.total();
        if n == 0 {
            return 0.0;
        }
        let hits: u64 = (0..self.num_classes)
            .map(|c| self.counts[c * self.num_classes + c])
            .sum();
        hits as f64 / n as f64
    }

    /// Recall of each class; `None` for classes absent from the truth.
    pub fn per_class_accuracy(&self) -> Vec<Option<f64>> {
        (0..self.num_classes)
            .map(|c| {
                let row = self.row_total(c);
                if row == 0 {
                    None
                } else {
                    Some(self.counts[c * self.num_classes + c] as f64 / row as f64)
                }
            })
            .collect()
    }

    /// Mean recall over the classes present in the truth.
    pub fn average_accuracy(&self) -> f64 {
        let recalls: Vec<f64> = self.per_class_accuracy().into_iter().flatten().collect();
        if recalls.is_empty() {
            return 0.0;
        }
        recalls.iter().sum::<f64>() / recalls.len() as f64
    }

    /// Chance-corrected agreement `(p_o - p_e) / (1 - p_e)`, where `p_e`
    /// is the agreement expected from the marginals alone. Degenerate
    /// matrices with `p_e = 1` score 1 on perfect agreement, else 0.
    pub fn kappa(&self) -> f64 {
        let n = self.total() as f64;
        if n == 0.0 {
            return 0.0;
        }
        let p_o = self.overall_accuracy();
        let p_e: f64 = (0..self.num_classes)
            .map(|c| (self.row_total(c) as f64 / n) * (self.col_total(c) as f64 / n))
            .sum();
        let denom = 1.0 - p_e;
        if denom.abs() <= 1e-12 {
            return if (p_o - 1.0).abs() <= 1e-12 { 1.0 } else { 0.0 };
        }
        (p_o - p_e) / denom
    }
}

/// Metrics of one trained model on one test set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    pub oa: f64,
    pub aa: f64,
    pub kappa: f64,
    /// Per-class recall; negative-free, `null` for classes missing from
    /// the truth.
    pub per_class: Vec<Option<f64>>,
}

impl MetricsReport {
    pub fn from_confusion(matrix: &ConfusionMatrix) -> Self {
        MetricsReport {
            oa: matrix.overall_accuracy(),
            aa: matrix.average_accuracy(),
            kappa: matrix.kappa(),
            per_class: matrix.per_class_accuracy(),
        }
    }
}

/// Mean and population standard deviation of each metric over repeats.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AggregateMetrics {
    pub mean_oa: f64,
    pub std_oa: f64,
    pub mean_aa: f64,
    pub std_aa: f64,
    pub mean_kappa: f64,
    pub std_kappa: f64,
}

fn mean_and_std(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
    (mean, var.sqrt())
}

impl AggregateMetrics {
    pub fn over(runs: &[MetricsReport]) -> Self {
        assert!(!runs.is_empty(), "aggregate needs at least one run");
        let (mean_oa, std_oa) = mean_and_std(&runs.iter().map(|r| r.oa).collect::<Vec<_>>());
        let (mean_aa, std_aa) = mean_and_std(&runs.iter().map(|r| r.aa).collect::<Vec<_>>());
        let (mean_kappa, std_kappa) =
            mean_and_std(&runs.iter().map(|r| r.kappa).collect::<Vec<_>>());
        AggregateMetrics {
            mean_oa,
            std_oa,
            mean_aa,
            std_aa,
            mean_kappa,
            std_kappa,
        }
    }
}

/// Scores precomputed feature vectors against their true classes.
pub fn evaluate_features(
    model: &Mlp,
    features: &[Vec<f64>],
    truths: &[u16],
) -> Result<MetricsReport> {
    if features.is_empty() {
        return Err(Error::EmptyTestSet);
    }
    assert_eq!(features.len(), truths.len(), "one truth per feature vector");
    let mut matrix = ConfusionMatrix::new(model.num_classes);
    for (x, &truth) in features.iter().zip(truths) {
        let (_, dist) = model.forward(x)?;
        matrix.record(truth, dist.argmax_class());
    }
    Ok(MetricsReport::from_confusion(&matrix))
}

/// Extracts patches at the given pixels, featurizes, and scores them.
pub fn evaluate(
    model: &Mlp,
    featurizer: &PatchFeaturizer,
    cube: &crate::hsicore::HsiCube,
    test_pixels: &[(usize, u16)],
) -> Result<MetricsReport> {
    if test_pixels.is_empty() {
        return Err(Error::EmptyTestSet);
    }
    let mut features = Vec::with_capacity(test_pixels.len());
    let mut truths = Vec::with_capacity(test_pixels.len());
    for &(pixel, truth) in test_pixels {
        let (row, col) = (pixel / cube.width(), pixel % cube.width());
        let patch = crate::hsicore::extract_patch(cube, row, col, featurizer.patch_size())?;
        features.push(featurizer.features(&patch)?);
        truths.push(truth);
    }
    evaluate_features(model, &features, &truths)
}
