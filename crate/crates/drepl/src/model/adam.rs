//! Adam optimizer over the perceptron's four parameter tensors.

use super::{Gradients, Mlp};

/// First/second-moment state plus hyperparameters. One instance drives one
/// model; `step` is the single writer of both model and state.
#[derive(Debug, Clone)]
pub struct AdamState {
    pub learning_rate: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub epsilon: f64,
    steps: u64,
    m: Gradients,
    v: Gradients,
}

impl AdamState {
    pub fn new(model: &Mlp, learning_rate: f64) -> Self {
        AdamState {
            learning_rate,
            beta1: 0.9,
            beta2: 0.999,
            epsilon: 1e-8,
            steps: 0,
            m: Gradients::zeros_like(model),
            v: Gradients::zeros_like(model),
        }
    }

    pub fn steps_taken(&self) -> u64 {
        self.steps
    }

    /// One bias-corrected Adam update in place.
    pub fn step(&mut self, model: &mut Mlp, grads: &Gradients) {
        self.steps += 1;
        let t = self.steps as i32;
        let correction1 = 1.0 - self.beta1.powi(t);
        let correction2 = 1.0 - self.beta2.powi(t);
        let tensors: [(&mut Vec<f64>, &Vec<f64>, &mut Vec<f64>, &mut Vec<f64>); 4] = [
            (&mut model.w1, &grads.w1, &mut self.m.w1, &mut self.v.w1),
            (&mut model.b1, &grads.b1, &mut self.m.b1, &mut self.v.b1),
            (&mut model.w2, &grads.w2, &mut self.m.w2, &mut self.v.w2),
            (&mut model.b2, &grads.b2, &mut self.m.b2, &mut self.v.b2),
        ];
        for (params, grad, m, v) in tensors {
            for i in 0..params.len() {
                let g = grad[i];
                m[i] = self.beta1 * m[i] + (1.0 - self.beta1) * g;
                v[i] = self.beta2 * v[i] + (1.0 - self.beta2) * g * g;
                let m_hat = m[i] / correction1;
                let v_hat = v[i] / correction2;
                params[i] -= self.learning_rate * m_hat / (v_hat.sqrt() + self.epsilon);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny_model() -> Mlp {
        Mlp::zeros(1, 1, 2).unwrap()
    }

    #[test]
    fn first_step_moves_by_learning_rate() {
        // With bias correction, the first update is lr · g/(|g| + ~0), i.e.
        // a step of magnitude ~lr in the gradient's direction regardless of
        // its size.
        let mut model = tiny_model();
        let mut adam = AdamState::new(&model, 1e-3);
        let mut grads = Gradients::zeros_like(&model);
        grads.w1[0] = 0.37;
        adam.step(&mut model, &grads);
        assert!((model.w1[0] + 1e-3).abs() < 1e-9);
        assert_eq!(adam.steps_taken(), 1);
    }

    #[test]
    fn first_step_is_scale_invariant() {
        for scale in [1.0, 10.0, 1000.0] {
            let mut model = tiny_model();
            let mut adam = AdamState::new(&model, 1e-3);
            let mut grads = Gradients::zeros_like(&model);
            grads.b2[1] = scale;
            adam.step(&mut model, &grads);
            assert!((model.b2[1] + 1e-3).abs() < 1e-8, "scale {scale}");
        }
    }

    #[test]
    fn zero_gradient_leaves_parameters_unchanged() {
        let mut model = tiny_model();
        let before = model.clone();
        let mut adam = AdamState::new(&model, 1e-3);
        let grads = Gradients::zeros_like(&model);
        adam.step(&mut model, &grads);
        assert_eq!(model, before);
    }

    #[test]
    fn constant_gradient_walks_monotonically() {
        let mut model = tiny_model();
        let mut adam = AdamState::new(&model, 1e-3);
        let mut grads = Gradients::zeros_like(&model);
        grads.w1[0] = 1.0;
        let mut last = 0.0;
        for _ in 0..10 {
            adam.step(&mut model, &grads);
            assert!(model.w1[0] < last);
            last = model.w1[0];
        }
    }
}
