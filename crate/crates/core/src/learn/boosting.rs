// SPDX-License-Identifier: Apache-2.0

//! Gradient boosting on logistic loss.
//!
//! Both variants start from a zero score (probability 0.5). Stage `t` fits
//! a tree to the residuals `y - p` and moves every row by the tree's leaf
//! value scaled by `learn_rate * learn_rate_annealing^t`.
//!
//! * `gradient_boosting`: squared-error splits on the residuals, Newton leaf
//!   `Σr / Σp(1-p)`.
//! * `regularized_gradient_boosting`: second-order split gain
//!   `½[G_L²/(H_L+λ) + G_R²/(H_R+λ) - G²/(H+λ)]`, leaf `Σr / (Σp(1-p) + λ)`.

use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::tree::{Criterion, GrowConfig, Grower, Tree};
use super::{log_loss, sigmoid, LearnerParams, Variant};
use crate::features::SparseVector;

/// Below this hessian mass a Newton leaf is set to zero.
const MIN_HESSIAN: f64 = 1e-150;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Boosted {
    /// Trees with the stage shrinkage already folded into the leaves.
    pub trees: Vec<Tree>,
    /// Training log-loss after 0, 1, ..., n stages.
    pub training_loss: Vec<f64>,
}

impl Boosted {
    pub fn score(&self, x: &SparseVector) -> f64 {
        self.trees.iter().map(|t| t.predict(x)).sum()
    }

    pub fn proba(&self, x: &SparseVector) -> f64 {
        sigmoid(self.score(x))
    }
}

pub(super) fn train_boosted(params: &LearnerParams, x: &[SparseVector], y: &[bool], width: usize) -> Boosted {
    let (criterion, lambda) = match params.variant {
        Variant::RegularizedGradientBoosting => (
            Criterion::Newton {
                lambda: params.reg_lambda,
            },
            params.reg_lambda,
        ),
        _ => (Criterion::Variance, 0.0),
    };
    let config = GrowConfig {
        criterion,
        max_depth: params.max_depth,
        min_rows: params.min_rows,
        features_per_split: params.max_features,
    };
    let target: Vec<f64> = y.iter().map(|&b| f64::from(u8::from(b))).collect();
    let n = x.len();
    let sample: Vec<u32> = (0..n as u32).collect();

    let mut score = vec![0.0; n];
    let mut proba = vec![0.5; n];
    let mut residual = vec![0.0; n];
    let mut hessian = vec![0.0; n];
    let mut trees = Vec::with_capacity(params.n_trees);
    let mut training_loss = vec![log_loss(&proba, y)];
    let mut shrink = params.learn_rate;
    let mut rng: Option<ChaCha8Rng> = params
        .max_features
        .map(|_| rand::SeedableRng::seed_from_u64(params.seed));

    for _ in 0..params.n_trees {
        for i in 0..n {
            residual[i] = target[i] - proba[i];
            hessian[i] = proba[i] * (1.0 - proba[i]);
        }
        let leaf_value = |rows: &[u32]| {
            let g: f64 = rows.iter().map(|&r| residual[r as usize]).sum();
            let h: f64 = rows.iter().map(|&r| hessian[r as usize]).sum::<f64>() + lambda;
            if h.abs() < MIN_HESSIAN {
                0.0
            } else {
                g / h
            }
        };
        let grown = Grower::new(x, &residual, &hessian, width, &config, rng.as_mut()).grow(&sample, leaf_value);
        let mut tree = grown.tree;
        tree.scale_leaves(shrink);
        for (i, &leaf) in grown.leaf_of_sample.iter().enumerate() {
            if let super::tree::Node::Leaf { value } = tree.nodes()[leaf as usize] {
                score[i] += value;
            }
            proba[i] = sigmoid(score[i]);
        }
        training_loss.push(log_loss(&proba, y));
        trees.push(tree);
        shrink *= params.learn_rate_annealing;
    }
    Boosted { trees, training_loss }
}
