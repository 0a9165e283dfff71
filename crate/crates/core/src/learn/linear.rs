// SPDX-License-Identifier: Apache-2.0

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{sigmoid, LearnerParams};
use crate::features::SparseVector;

/// Weights are rescaled in place once the lazy scale drops below this.
const RESCALE_BELOW: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearModel {
    pub weights: Vec<f64>,
    pub bias: f64,
}

impl LinearModel {
    pub fn new(weights: Vec<f64>, bias: f64) -> Self {
        LinearModel { weights, bias }
    }

    pub fn zeros(width: usize) -> Self {
        LinearModel::new(vec![0.0; width], 0.0)
    }

    pub fn margin(&self, x: &SparseVector) -> f64 {
        self.bias + x.iter().map(|(i, v)| self.weights[i] * v).sum::<f64>()
    }

    pub fn proba(&self, x: &SparseVector) -> f64 {
        sigmoid(self.margin(x))
    }
}

/// Softplus `ln(1 + e^z)` without overflow.
fn softplus(z: f64) -> f64 {
    if z > 0.0 {
        z + (-z).exp().ln_1p()
    } else {
        z.exp().ln_1p()
    }
}

/// Mean logistic loss plus `l2/2 * |w|²` (bias unpenalized).
pub fn logistic_objective(model: &LinearModel, x: &[SparseVector], y: &[bool], l2: f64) -> f64 {
    let data: f64 = x
        .iter()
        .zip(y)
        .map(|(xi, &yi)| {
            let z = model.margin(xi);
            if yi {
                softplus(-z)
            } else {
                softplus(z)
            }
        })
        .sum::<f64>()
        / x.len() as f64;
    let penalty: f64 = model.weights.iter().map(|w| w * w).sum::<f64>();
    data + 0.5 * l2 * penalty
}

/// Gradient of [`logistic_objective`] as `(d/dw, d/db)`.
pub fn logistic_gradient(model: &LinearModel, x: &[SparseVector], y: &[bool], l2: f64) -> (Vec<f64>, f64) {
    let n = x.len() as f64;
    let mut gw: Vec<f64> = model.weights.iter().map(|w| l2 * w).collect();
    let mut gb = 0.0;
    for (xi, &yi) in x.iter().zip(y) {
        let r = (model.proba(xi) - f64::from(u8::from(yi))) / n;
        gb += r;
        for (j, v) in xi.iter() {
            gw[j] += r * v;
        }
    }
    (gw, gb)
}

/// Per-example SGD on logistic loss with step `step / sqrt(t)`, `t` counting
/// updates from 1. The L2 shrink is applied through a lazy scale so each
/// update touches only the row's non-zeros.
pub(super) fn train_sgd(params: &LearnerParams, x: &[SparseVector], y: &[bool], width: usize) -> LinearModel {
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let mut v = vec![0.0; width];
    let mut scale = 1.0;
    let mut bias = 0.0;
    let mut order: Vec<usize> = (0..x.len()).collect();
    let mut t = 0u64;
    for _ in 0..params.epochs {
        order.shuffle(&mut rng);
        for &i in &order {
            t += 1;
            let eta = params.step / (t as f64).sqrt();
            let xi = &x[i];
            let z = bias + scale * xi.iter().map(|(j, val)| v[j] * val).sum::<f64>();
            let r = sigmoid(z) - f64::from(u8::from(y[i]));
            scale *= 1.0 - eta * params.l2;
            for (j, val) in xi.iter() {
                v[j] -= eta * r * val / scale;
            }
            bias -= eta * r;
            if scale < RESCALE_BELOW {
                v.iter_mut().for_each(|w| *w *= scale);
                scale = 1.0;
            }
        }
    }
    v.iter_mut().for_each(|w| *w *= scale);
    LinearModel::new(v, bias)
}
