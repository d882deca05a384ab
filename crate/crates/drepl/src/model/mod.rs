//! A small two-layer perceptron over pooled patch features, with analytic
//! gradients, the weak/strong augmentation pair, and the training losses.
//!
//! The classifier is deliberately tiny: one tanh hidden layer on top of a
//! fixed feature map ([`PatchFeaturizer`]). That is enough to exercise every
//! gating and loss mechanism in the pipeline while keeping full training
//! runs inside test budgets. Every gradient is written out by hand and
//! checked against central finite differences in the tests.
//!
//! Loss stack:
//! * supervised cross-entropy over the labeled pixels,
//! * cross-entropy of strong-branch predictions against pseudo-labels for
//!   easy samples,
//! * KL divergence from sharpened weak-branch targets to strong-branch
//!   predictions for ambiguous samples, ramped in by [`lambda_schedule`],
//! * hard samples contribute nothing.

mod adam;
mod augment;
mod checkpoint;
mod features;

pub use adam::AdamState;
pub use augment::{augment, flip_horizontal, flip_vertical, AugmentedPair};
pub use checkpoint::{load_checkpoint, save_checkpoint, Checkpoint};
pub use features::PatchFeaturizer;

use crate::dhp::PredictionDistribution;
use crate::error::{Error, Result};
use crate::hsicore::SeededRng;

/// Default hidden-layer width.
pub const DEFAULT_HIDDEN_DIM: usize = 64;
/// Default ceiling of the ambiguous-loss weight ramp.
pub const DEFAULT_LAMBDA_MAX: f64 = 0.5;
/// Default sharpening temperature for weak-branch targets.
pub const DEFAULT_TAU_T: f64 = 0.5;
/// Default strong-augmentation noise scale.
pub const DEFAULT_SIGMA_S: f64 = 0.05;

/// Two-layer perceptron: `softmax(W2 · tanh(W1 x + b1) + b2)`.
///
/// Weight matrices are stored flat and row-major: `w1[h * input_dim + i]`
/// maps input `i` to hidden unit `h`.
#[derive(Debug, Clone, PartialEq)]
pub struct Mlp {
    pub input_dim: usize,
    pub hidden_dim: usize,
    pub num_classes: usize,
    pub w1: Vec<f64>,
    pub b1: Vec<f64>,
    pub w2: Vec<f64>,
    pub b2: Vec<f64>,
}

/// Parameter-shaped gradient accumulator.
#[derive(Debug, Clone)]
pub struct Gradients {
    pub w1: Vec<f64>,
    pub b1: Vec<f64>,
    pub w2: Vec<f64>,
    pub b2: Vec<f64>,
}

impl Gradients {
    pub fn zeros_like(model: &Mlp) -> Self {
        Gradients {
            w1: vec![0.0; model.w1.len()],
            b1: vec![0.0; model.b1.len()],
            w2: vec![0.0; model.w2.len()],
            b2: vec![0.0; model.b2.len()],
        }
    }

    /// Adds `scale * other` into `self`.
    pub fn add_scaled(&mut self, other: &Gradients, scale: f64) {
        for (a, b) in self.w1.iter_mut().zip(&other.w1) {
            *a += scale * b;
        }
        for (a, b) in self.b1.iter_mut().zip(&other.b1) {
            *a += scale * b;
        }
        for (a, b) in self.w2.iter_mut().zip(&other.w2) {
            *a += scale * b;
        }
        for (a, b) in self.b2.iter_mut().zip(&other.b2) {
            *a += scale * b;
        }
    }

    pub fn scale(&mut self, factor: f64) {
        for v in self
            .w1
            .iter_mut()
            .chain(&mut self.b1)
            .chain(&mut self.w2)
            .chain(&mut self.b2)
        {
            *v *= factor;
        }
    }
}

impl Mlp {
    /// Zero-initialized model (uniform predictions everywhere).
    pub fn zeros(input_dim: usize, hidden_dim: usize, num_classes: usize) -> Result<Self> {
        if input_dim == 0 || hidden_dim == 0 || num_classes == 0 {
            return Err(Error::InvalidConfig(
                "model dimensions must all be positive".into(),
            ));
        }
        Ok(Mlp {
            input_dim,
            hidden_dim,
            num_classes,
            w1: vec![0.0; hidden_dim * input_dim],
            b1: vec![0.0; hidden_dim],
            w2: vec![0.0; num_classes * hidden_dim],
            b2: vec![0.0; num_classes],
        })
    }

    /// Xavier-uniform initialization: weights from
    /// `U(-sqrt(6/(fan_in+fan_out)), +...)`, biases zero.
    pub fn xavier_init(
        input_dim: usize,
        hidden_dim: usize,
        num_classes: usize,
        rng: &mut SeededRng,
    ) -> Result<Self> {
        let mut model = Mlp::zeros(input_dim, hidden_dim, num_classes)?;
        let limit1 = (6.0 / (input_dim + hidden_dim) as f64).sqrt();
        for w in &mut model.w1 {
            *w = (rng.next_f64() * 2.0 - 1.0) * limit1;
        }
        let limit2 = (6.0 / (hidden_dim + num_classes) as f64).sqrt();
        for w in &mut model.w2 {
            *w = (rng.next_f64() * 2.0 - 1.0) * limit2;
        }
        Ok(model)
    }

    fn check_input(&self, features: &[f64]) -> Result<()> {
        if features.len() != self.input_dim {
            return Err(Error::LengthMismatch {
                expected: self.input_dim,
                got: features.len(),
                context: "classifier input features",
            });
        }
        Ok(())
    }

    /// Hidden activations and logits for one input.
    fn forward_cache(&self, features: &[f64]) -> (Vec<f64>, Vec<f64>) {
        let mut hidden = vec![0.0; self.hidden_dim];
        for h in 0..self.hidden_dim {
            let mut a = self.b1[h];
            let row = &self.w1[h * self.input_dim..(h + 1) * self.input_dim];
            for (w, x) in row.iter().zip(features) {
                a += w * x;
            }
            hidden[h] = a.tanh();
        }
        let mut logits = vec![0.0; self.num_classes];
        for k in 0..self.num_classes {
            let mut z = self.b2[k];
            let row = &self.w2[k * self.hidden_dim..(k + 1) * self.hidden_dim];
            for (w, h) in row.iter().zip(&hidden) {
                z += w * h;
            }
            logits[k] = z;
        }
        (hidden, logits)
    }

    /// Logits and their softmax for one feature vector.
    pub fn forward(&self, features: &[f64]) -> Result<(Vec<f64>, PredictionDistribution)> {
        self.check_input(features)?;
        let (_, logits) = self.forward_cache(features);
        let probs = softmax(&logits);
        Ok((logits, PredictionDistribution::new(probs)?))
    }

    /// Backpropagates a logit-space gradient for one input into `grads`.
    fn accumulate_backward(
        &self,
        features: &[f64],
        hidden: &[f64],
        dlogits: &[f64],
        grads: &mut Gradients,
    ) {
        for k in 0..self.num_classes {
            let g = dlogits[k];
            grads.b2[k] += g;
            let row = &mut grads.w2[k * self.hidden_dim..(k + 1) * self.hidden_dim];
            for (gw, h) in row.iter_mut().zip(hidden) {
                *gw += g * h;
            }
        }
        for h in 0..self.hidden_dim {
            let mut dh = 0.0;
            for k in 0..self.num_classes {
                dh += dlogits[k] * self.w2[k * self.hidden_dim + h];
            }
            let da = dh * (1.0 - hidden[h] * hidden[h]);
            grads.b1[h] += da;
            let row = &mut grads.w1[h * self.input_dim..(h + 1) * self.input_dim];
            for (gw, x) in row.iter_mut().zip(features) {
                *gw += da * x;
            }
        }
    }
}

/// Numerically stable softmax.
pub fn softmax(logits: &[f64]) -> Vec<f64> {
    let hi = logits.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let exps: Vec<f64> = logits.iter().map(|&z| (z - hi).exp()).collect();
    let sum: f64 = exps.iter().sum();
    exps.iter().map(|&e| e / sum).collect()
}

/// `log(sum(exp(logits)))` without overflow.
fn log_sum_exp(logits: &[f64]) -> f64 {
    let hi = logits.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    hi + logits.iter().map(|&z| (z - hi).exp()).sum::<f64>().ln()
}

/// Mean cross-entropy of the model on labeled features, with gradients.
///
/// Labels are 1-based class ids.
pub fn supervised_loss(
    model: &Mlp,
    features: &[Vec<f64>],
    labels: &[u16],
) -> Result<(f64, Gradients)> {
    if features.is_empty() {
        return Err(Error::EmptyBatch);
    }
    assert_eq!(features.len(), labels.len(), "one label per feature vector");
    cross_entropy_batch(model, features, labels)
}

/// Mean cross-entropy of strong-branch features against hard pseudo-labels.
/// An empty easy set contributes nothing.
pub fn easy_loss(
    model: &Mlp,
    strong_features: &[Vec<f64>],
    pseudo_labels: &[u16],
) -> Result<(f64, Gradients)> {
    if strong_features.is_empty() {
        return Ok((0.0, Gradients::zeros_like(model)));
    }
    assert_eq!(strong_features.len(), pseudo_labels.len());
    cross_entropy_batch(model, strong_features, pseudo_labels)
}

fn cross_entropy_batch(
    model: &Mlp,
    features: &[Vec<f64>],
    labels: &[u16],
) -> Result<(f64, Gradients)> {
    let n = features.len() as f64;
    let mut total = 0.0;
    let mut grads = Gradients::zeros_like(model);
    for (x, &label) in features.iter().zip(labels) {
        model.check_input(x)?;
        assert!(
            label >= 1 && usize::from(label) <= model.num_classes,
            "label {label} outside 1..={}",
            model.num_classes
        );
        let y = usize::from(label) - 1;
        let (hidden, logits) = model.forward_cache(x);
        total += log_sum_exp(&logits) - logits[y];
        let mut dlogits = softmax(&logits);
        dlogits[y] -= 1.0;
        for d in &mut dlogits {
            *d /= n;
        }
        model.accumulate_backward(x, &hidden, &dlogits, &mut grads);
    }
    Ok((total / n, grads))
}

/// Raises a distribution to `1/tau` and renormalizes. `tau < 1` sharpens,
/// `tau = 1` is the identity, one-hot inputs are fixed points.
pub fn sharpen(dist: &PredictionDistribution, tau: f64) -> PredictionDistribution {
    assert!(tau > 0.0, "temperature must be positive");
    let powered: Vec<f64> = dist
        .probabilities()
        .iter()
        .map(|&p| p.powf(1.0 / tau))
        .collect();
    let sum: f64 = powered.iter().sum();
    PredictionDistribution::new(powered.iter().map(|&p| p / sum).collect())
        .expect("sharpening a valid distribution stays valid")
}

/// Mean KL divergence from sharpened weak-branch targets to strong-branch
/// predictions, with gradients through the strong branch only (the targets
/// are plain numbers here, already detached by construction).
///
/// An empty ambiguous set contributes nothing.
pub fn ambiguous_loss(
    model: &Mlp,
    strong_features: &[Vec<f64>],
    weak_targets: &[PredictionDistribution],
    tau_t: f64,
) -> Result<(f64, Gradients)> {
    if strong_features.is_empty() {
        return Ok((0.0, Gradients::zeros_like(model)));
    }
    assert_eq!(strong_features.len(), weak_targets.len());
    let n = strong_features.len() as f64;
    let mut total = 0.0;
    let mut grads = Gradients::zeros_like(model);
    for (x, target) in strong_features.iter().zip(weak_targets) {
        model.check_input(x)?;
        let q = sharpen(target, tau_t);
        let q = q.probabilities();
        assert_eq!(q.len(), model.num_classes, "target classes match model");
        let (hidden, logits) = model.forward_cache(x);
        let lse = log_sum_exp(&logits);
        let p = softmax(&logits);
        // KL(q ‖ p) = Σ q (ln q − ln p); terms with q = 0 vanish.
        let mut kl = 0.0;
        for k in 0..q.len() {
            if q[k] > 0.0 {
                kl += q[k] * (q[k].ln() - (logits[k] - lse));
            }
        }
        total += kl;
        let mut dlogits = vec![0.0; q.len()];
        for k in 0..q.len() {
            dlogits[k] = (p[k] - q[k]) / n;
        }
        model.accumulate_backward(x, &hidden, &dlogits, &mut grads);
    }
    Ok((total / n, grads))
}

/// Linear ramp of the ambiguous-loss weight: 0 at epoch 0, `lambda_max` at
/// `total_epochs`, clamped beyond.
pub fn lambda_schedule(epoch: usize, total_epochs: usize, lambda_max: f64) -> f64 {
    if total_epochs == 0 || epoch >= total_epochs {
        return lambda_max;
    }
    lambda_max * epoch as f64 / total_epochs as f64
}

/// The component losses of one optimizer step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LossBreakdown {
    pub l_sup: f64,
    pub l_easy: f64,
    pub l_amb: f64,
    pub lambda_a: f64,
    pub l_unsup: f64,
    pub l_total: f64,
}

/// Everything `total_loss` consumes beyond the labeled batch.
#[derive(Debug, Clone, Default)]
pub struct UnlabeledBatch {
    pub easy_features: Vec<Vec<f64>>,
    pub easy_labels: Vec<u16>,
    pub ambiguous_features: Vec<Vec<f64>>,
    pub ambiguous_targets: Vec<PredictionDistribution>,
}

/// Combined objective: supervised + easy + `lambda_a` · ambiguous, all on
/// the same parameter snapshot. Returns the breakdown and the summed
/// gradient.
pub fn total_loss(
    model: &Mlp,
    labeled_features: &[Vec<f64>],
    labels: &[u16],
    unlabeled: &UnlabeledBatch,
    tau_t: f64,
    lambda_a: f64,
) -> Result<(LossBreakdown, Gradients)> {
    let (l_sup, sup_grads) = supervised_loss(model, labeled_features, labels)?;
    let (l_easy, easy_grads) = easy_loss(model, &unlabeled.easy_features, &unlabeled.easy_labels)?;
    let (l_amb, amb_grads) = ambiguous_loss(
        model,
        &unlabeled.ambiguous_features,
        &unlabeled.ambiguous_targets,
        tau_t,
    )?;
    let l_unsup = l_easy + lambda_a * l_amb;
    let l_total = l_sup + l_unsup;
    let mut grads = sup_grads;
    grads.add_scaled(&easy_grads, 1.0);
    grads.add_scaled(&amb_grads, lambda_a);
    Ok((
        LossBreakdown {
            l_sup,
            l_easy,
            l_amb,
            lambda_a,
            l_unsup,
            l_total,
        },
        grads,
    ))
}
