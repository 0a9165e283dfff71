// SPDX-License-Identifier: Apache-2.0

//! Binary classifiers with probability outputs and soft-voting ensembles.
//!
//! Every learner consumes [`SparseVector`] rows; dense inputs are converted
//! with [`SparseVector::from_dense`]. Absent entries read as 0.0.

mod bayes;
mod boosting;
mod ensemble;
mod forest;
mod linear;
pub mod tree;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::features::SparseVector;

pub use bayes::GaussianNb;
pub use boosting::Boosted;
pub use ensemble::{make_ensemble, EnsembleKind, SoftVoteEnsemble};
pub use linear::{logistic_gradient, logistic_objective, LinearModel};
pub use tree::{Node, Tree};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    DecisionTree,
    RandomForest,
    GradientBoosting,
    RegularizedGradientBoosting,
    LogisticRegression,
    SgdLinear,
    GaussianNaiveBayes,
}

impl Variant {
    pub fn name(self) -> &'static str {
        match self {
            Variant::DecisionTree => "decision_tree",
            Variant::RandomForest => "random_forest",
            Variant::GradientBoosting => "gradient_boosting",
            Variant::RegularizedGradientBoosting => "regularized_gradient_boosting",
            Variant::LogisticRegression => "logistic_regression",
            Variant::SgdLinear => "sgd_linear",
            Variant::GaussianNaiveBayes => "gaussian_naive_bayes",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct LearnerParams {
    pub variant: Variant,
    /// Trees in a forest or boosting stages.
    #[serde(alias = "n_estimators")]
    pub n_trees: usize,
    pub max_depth: usize,
    /// Minimum training rows in every leaf.
    pub min_rows: usize,
    pub learn_rate: f64,
    /// Stage `t` is shrunk by `learn_rate * learn_rate_annealing^t`.
    pub learn_rate_annealing: f64,
    /// L2 penalty on leaf values (regularized boosting).
    pub reg_lambda: f64,
    /// Features drawn per split; `None` considers every feature
    /// (random forests default to the square root of the width).
    pub max_features: Option<usize>,
    pub epochs: usize,
    /// Initial SGD step; decays as `1/sqrt(t)`.
    pub step: f64,
    /// L2 penalty on linear-model weights.
    pub l2: f64,
    pub seed: u64,
}

impl Default for LearnerParams {
    fn default() -> Self {
        LearnerParams {
            variant: Variant::GradientBoosting,
            n_trees: 60,
            max_depth: 15,
            min_rows: 2,
            learn_rate: 0.1,
            learn_rate_annealing: 1.0,
            reg_lambda: 1.0,
            max_features: None,
            epochs: 20,
            step: 0.01,
            l2: 1e-4,
            seed: 0,
        }
    }
}

impl LearnerParams {
    /// Textual-channel booster: 300 stages, depth 50, rate 0.1, all features per split.
    pub fn textual_gradient_boosting() -> Self {
        LearnerParams {
            variant: Variant::GradientBoosting,
            n_trees: 300,
            max_depth: 50,
            min_rows: 1,
            ..Default::default()
        }
    }

    /// Non-textual booster: 60 trees, depth 15, min 2 rows, rate 0.1, no annealing.
    pub fn nontextual_gradient_boosting() -> Self {
        LearnerParams::default()
    }

    /// Non-textual second-order booster: 60 trees, depth 15, min 2 rows, rate 0.1.
    pub fn nontextual_regularized_boosting() -> Self {
        LearnerParams {
            variant: Variant::RegularizedGradientBoosting,
            ..Default::default()
        }
    }

    pub fn random_forest() -> Self {
        LearnerParams {
            variant: Variant::RandomForest,
            ..Default::default()
        }
    }

    pub fn decision_tree(max_depth: usize) -> Self {
        LearnerParams {
            variant: Variant::DecisionTree,
            max_depth,
            min_rows: 1,
            ..Default::default()
        }
    }

    pub fn logistic_regression() -> Self {
        LearnerParams {
            variant: Variant::LogisticRegression,
            l2: 0.0,
            ..Default::default()
        }
    }

    pub fn sgd_linear() -> Self {
        LearnerParams {
            variant: Variant::SgdLinear,
            ..Default::default()
        }
    }

    pub fn gaussian_naive_bayes() -> Self {
        LearnerParams {
            variant: Variant::GaussianNaiveBayes,
            ..Default::default()
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let unit = |name: &str, v: f64| {
            if v > 0.0 && v <= 1.0 {
                Ok(())
            } else {
                Err(Error::param(format!("{name} = {v} not in (0, 1]")))
            }
        };
        if self.max_depth < 1 {
            return Err(Error::param("max_depth must be at least 1"));
        }
        if self.min_rows < 1 {
            return Err(Error::param("min_rows must be at least 1"));
        }
        if self.n_trees < 1 {
            return Err(Error::param("n_trees must be at least 1"));
        }
        unit("learn_rate", self.learn_rate)?;
        unit("learn_rate_annealing", self.learn_rate_annealing)?;
        unit("step", self.step)?;
        if self.reg_lambda < 0.0 || self.l2 < 0.0 {
            return Err(Error::param("penalties must be non-negative"));
        }
        if self.max_features == Some(0) {
            return Err(Error::param("max_features must be at least 1"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Model {
    Tree(Tree),
    Forest(Vec<Tree>),
    Boosted(Boosted),
    Linear(LinearModel),
    NaiveBayes(GaussianNb),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainedLearner {
    pub params: LearnerParams,
    pub width: usize,
    pub model: Model,
}

/// Anything that maps a feature vector to a positive-class probability.
pub trait Classifier {
    fn width(&self) -> usize;

    /// Probability for a vector whose width has already been checked.
    fn proba_unchecked(&self, x: &SparseVector) -> f64;

    fn predict_proba(&self, x: &SparseVector) -> Result<f64> {
        if x.width() != self.width() {
            return Err(Error::WidthMismatch {
                expected: self.width(),
                actual: x.width(),
            });
        }
        Ok(self.proba_unchecked(x))
    }

    fn predict_proba_all(&self, xs: &[SparseVector]) -> Result<Vec<f64>> {
        xs.iter().map(|x| self.predict_proba(x)).collect()
    }
}

pub(crate) fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

/// Checks shapes and labels; returns the common width.
pub(crate) fn check_training_set(x: &[SparseVector], y: &[bool]) -> Result<usize> {
    if x.is_empty() {
        return Err(Error::Training("empty training set".into()));
    }
    if x.len() != y.len() {
        return Err(Error::Training(format!("{} rows but {} labels", x.len(), y.len())));
    }
    if x.len() < 2 {
        return Err(Error::Training("need at least two rows".into()));
    }
    let width = x[0].width();
    if let Some(bad) = x.iter().find(|r| r.width() != width) {
        return Err(Error::WidthMismatch {
            expected: width,
            actual: bad.width(),
        });
    }
    if y.iter().all(|&l| l) || y.iter().all(|&l| !l) {
        return Err(Error::Training("labels contain a single class".into()));
    }
    Ok(width)
}

/// Trains the learner selected by `params.variant`.
pub fn train(params: &LearnerParams, x: &[SparseVector], y: &[bool]) -> Result<TrainedLearner> {
    params.validate()?;
    let width = check_training_set(x, y)?;
    let model = match params.variant {
        Variant::DecisionTree => Model::Tree(forest::train_tree(params, x, y, width)),
        Variant::RandomForest => Model::Forest(forest::train_forest(params, x, y, width)),
        Variant::GradientBoosting | Variant::RegularizedGradientBoosting => {
            Model::Boosted(boosting::train_boosted(params, x, y, width))
        }
        Variant::LogisticRegression | Variant::SgdLinear => Model::Linear(linear::train_sgd(params, x, y, width)),
        Variant::GaussianNaiveBayes => Model::NaiveBayes(GaussianNb::fit(x, y, width)),
    };
    Ok(TrainedLearner {
        params: params.clone(),
        width,
        model,
    })
}

impl Classifier for TrainedLearner {
    fn width(&self) -> usize {
        self.width
    }

    fn proba_unchecked(&self, x: &SparseVector) -> f64 {
        let p = match &self.model {
            Model::Tree(t) => t.predict(x),
            Model::Forest(trees) => trees.iter().map(|t| t.predict(x)).sum::<f64>() / trees.len() as f64,
            Model::Boosted(b) => b.proba(x),
            Model::Linear(l) => l.proba(x),
            Model::NaiveBayes(nb) => nb.proba(x),
        };
        p.clamp(0.0, 1.0)
    }
}

impl TrainedLearner {
    pub fn variant(&self) -> Variant {
        self.params.variant
    }

    /// Per-stage training log-loss for boosted models.
    pub fn training_loss(&self) -> Option<&[f64]> {
        match &self.model {
            Model::Boosted(b) => Some(&b.training_loss),
            _ => None,
        }
    }

    pub fn trees(&self) -> &[Tree] {
        match &self.model {
            Model::Tree(t) => std::slice::from_ref(t),
            Model::Forest(ts) => ts,
            Model::Boosted(b) => &b.trees,
            _ => &[],
        }
    }
}

/// Mean binary log-loss of probabilities against labels.
pub fn log_loss(p: &[f64], y: &[bool]) -> f64 {
    const EPS: f64 = 1e-15;
    let total: f64 = p
        .iter()
        .zip(y)
        .map(|(&p, &y)| {
            let p = p.clamp(EPS, 1.0 - EPS);
            if y {
                -p.ln()
            } else {
                -(1.0 - p).ln()
            }
        })
        .sum();
    total / p.len() as f64
}
