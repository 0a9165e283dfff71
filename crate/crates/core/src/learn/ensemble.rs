// SPDX-License-Identifier: Apache-2.0

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{train, Classifier, LearnerParams, TrainedLearner, Variant};
use crate::error::{Error, Result};
use crate::features::SparseVector;

/// Member sets for soft voting. GB is gradient boosting, XGB its
/// second-order regularized variant, RF a random forest.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EnsembleKind {
    RfGb,
    #[default]
    GbXgb,
    RfXgb,
    RfGbXgb,
}

impl EnsembleKind {
    pub const ALL: [EnsembleKind; 4] = [
        EnsembleKind::RfGb,
        EnsembleKind::GbXgb,
        EnsembleKind::RfXgb,
        EnsembleKind::RfGbXgb,
    ];

    /// Member variants in canonical order.
    pub fn variants(self) -> &'static [Variant] {
        use Variant::*;
        match self {
            EnsembleKind::RfGb => &[RandomForest, GradientBoosting],
            EnsembleKind::GbXgb => &[GradientBoosting, RegularizedGradientBoosting],
            EnsembleKind::RfXgb => &[RandomForest, RegularizedGradientBoosting],
            EnsembleKind::RfGbXgb => &[RandomForest, GradientBoosting, RegularizedGradientBoosting],
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            EnsembleKind::RfGb => "rf+gb",
            EnsembleKind::GbXgb => "gb+xgb",
            EnsembleKind::RfXgb => "rf+xgb",
            EnsembleKind::RfGbXgb => "rf+gb+xgb",
        }
    }

    /// Default member parameters, member `i` seeded with `seed + i`.
    pub fn default_params(self, seed: u64) -> Vec<LearnerParams> {
        self.variants()
            .iter()
            .enumerate()
            .map(|(i, v)| {
                let base = match v {
                    Variant::RandomForest => LearnerParams::random_forest(),
                    Variant::RegularizedGradientBoosting => LearnerParams::nontextual_regularized_boosting(),
                    _ => LearnerParams::nontextual_gradient_boosting(),
                };
                base.with_seed(seed.wrapping_add(i as u64))
            })
            .collect()
    }
}

impl fmt::Display for EnsembleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for EnsembleKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let norm = s
            .to_ascii_lowercase()
            .replace(['_', '-'], "+")
            .replace("xgboost", "xgb");
        EnsembleKind::ALL
            .into_iter()
            .find(|k| k.as_str() == norm || k.as_str().replace('+', "") == norm)
            .ok_or_else(|| Error::param(format!("unknown ensemble kind `{s}`")))
    }
}

/// Averages member probabilities.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SoftVoteEnsemble {
    kind: EnsembleKind,
    members: Vec<TrainedLearner>,
}

impl SoftVoteEnsemble {
    pub fn kind(&self) -> EnsembleKind {
        self.kind
    }

    pub fn members(&self) -> &[TrainedLearner] {
        &self.members
    }

    /// Trains each member with its own parameters on the same rows.
    pub fn train(kind: EnsembleKind, params: &[LearnerParams], x: &[SparseVector], y: &[bool]) -> Result<Self> {
        let members = params.iter().map(|p| train(p, x, y)).collect::<Result<Vec<_>>>()?;
        make_ensemble(kind, members)
    }
}

/// Checks that `members` are exactly the variants of `kind` (any order)
/// on a shared width and stores them in canonical order.
pub fn make_ensemble(kind: EnsembleKind, members: Vec<TrainedLearner>) -> Result<SoftVoteEnsemble> {
    let expected = kind.variants();
    let mut got: Vec<Variant> = members.iter().map(|m| m.variant()).collect();
    let mut want = expected.to_vec();
    got.sort_by_key(|v| v.name());
    want.sort_by_key(|v| v.name());
    if got != want {
        let names: Vec<&str> = members.iter().map(|m| m.variant().name()).collect();
        return Err(Error::param(format!(
            "{kind} ensemble needs {:?}, got {names:?}",
            expected.iter().map(|v| v.name()).collect::<Vec<_>>()
        )));
    }
    let width = members[0].width;
    if let Some(bad) = members.iter().find(|m| m.width != width) {
        return Err(Error::WidthMismatch {
            expected: width,
            actual: bad.width,
        });
    }
    let mut members = members;
    members.sort_by_key(|m| expected.iter().position(|&v| v == m.variant()));
    Ok(SoftVoteEnsemble { kind, members })
}

impl Classifier for SoftVoteEnsemble {
    fn width(&self) -> usize {
        self.members[0].width
    }

    fn proba_unchecked(&self, x: &SparseVector) -> f64 {
        self.members.iter().map(|m| m.proba_unchecked(x)).sum::<f64>() / self.members.len() as f64
    }
}
