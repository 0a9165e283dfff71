// SPDX-License-Identifier: Apache-2.0

//! Fusion of the textual and non-textual channels.
//!
//! The fused probability is `P_f = α·P_nt + (1 − α)·P_t`. α is picked from
//! the grid `{0, 1/s, …, 1}` by F1 at the decision threshold; among equal
//! F1 values the α closest to 0.5 wins, then the smaller α.

mod bundle;

use std::path::PathBuf;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::config::{Config, Resources};
use crate::corpus::RecordSource;
use crate::error::{Error, Result};
use crate::eval::{metrics, Metrics};
use crate::learn::{train, Classifier, SoftVoteEnsemble, TrainedLearner};
use crate::linkgen::LinkCandidate;
use crate::tabular::TabularEncoder;
use crate::tfidf::TextualVectorizer;

pub use bundle::{BUNDLE_MAGIC, BUNDLE_VERSION};

/// Fewest labeled candidates [`train_hybrid`] accepts.
pub const MIN_TRAINING_CANDIDATES: usize = 10;

fn check_probability(name: &str, p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::param(format!("{name} = {p} is not in [0, 1]")))
    }
}

/// `alpha * p_nt + (1 - alpha) * p_t`.
pub fn combine(p_nt: f64, p_t: f64, alpha: f64) -> Result<f64> {
    check_probability("p_nt", p_nt)?;
    check_probability("p_t", p_t)?;
    check_probability("alpha", alpha)?;
    Ok(alpha * p_nt + (1.0 - alpha) * p_t)
}

/// Outcome of the α grid search.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlphaChoice {
    pub alpha: f64,
    pub f1: f64,
    /// `(alpha, f1)` for every grid point, in grid order.
    pub grid: Vec<(f64, f64)>,
}

/// Grid search over `i / 20` at threshold 0.5.
pub fn tune_alpha(p_nt: &[f64], p_t: &[f64], labels: &[bool]) -> Result<AlphaChoice> {
    tune_alpha_with(
        p_nt,
        p_t,
        labels,
        crate::config::DEFAULT_ALPHA_STEPS,
        crate::config::DEFAULT_THRESHOLD,
    )
}

/// Grid search over `i / steps`. F1 values are compared exactly through
/// their confusion counts.
pub fn tune_alpha_with(p_nt: &[f64], p_t: &[f64], labels: &[bool], steps: u32, threshold: f64) -> Result<AlphaChoice> {
    if labels.is_empty() {
        return Err(Error::param("cannot tune alpha on an empty set"));
    }
    if p_nt.len() != labels.len() || p_t.len() != labels.len() {
        return Err(Error::param(format!(
            "length mismatch: {} non-textual, {} textual, {} labels",
            p_nt.len(),
            p_t.len(),
            labels.len()
        )));
    }
    if steps == 0 {
        return Err(Error::param("alpha grid needs at least one step"));
    }
    let mut grid = Vec::with_capacity(steps as usize + 1);
    // (2TP, 2TP + FP + FN, distance from the middle, index)
    let mut best: Option<(u128, u128, u32, u32)> = None;
    for i in 0..=steps {
        let alpha = f64::from(i) / f64::from(steps);
        let predicted = p_nt
            .iter()
            .zip(p_t)
            .map(|(&a, &b)| combine(a, b, alpha).map(|p| p >= threshold))
            .collect::<Result<Vec<bool>>>()?;
        let m = metrics(&predicted, labels)?;
        grid.push((alpha, m.f1));
        let num = 2 * m.tp as u128;
        let den = num + (m.fp + m.fn_) as u128;
        let dist = (2 * i).abs_diff(steps);
        let better = match best {
            None => true,
            Some((bn, bd, bdist, _)) => {
                // num/den vs bn/bd, 0/0 reads as 0
                let lhs = num * bd;
                let rhs = bn * den;
                lhs > rhs || (lhs == rhs && dist < bdist)
            }
        };
        if better {
            best = Some((num, den, dist, i));
        }
    }
    let (_, _, _, i) = best.expect("grid is non-empty");
    Ok(AlphaChoice {
        alpha: grid[i as usize].0,
        f1: grid[i as usize].1,
        grid,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TextualChannel {
    pub vectorizer: TextualVectorizer,
    pub learner: TrainedLearner,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NonTextualChannel {
    pub encoder: TabularEncoder,
    pub ensemble: SoftVoteEnsemble,
}

/// Per-candidate channel probabilities.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ChannelScores {
    pub p_nt: Vec<f64>,
    pub p_t: Vec<f64>,
}

impl ChannelScores {
    pub fn fused(&self, alpha: f64) -> Result<Vec<f64>> {
        self.p_nt
            .iter()
            .zip(&self.p_t)
            .map(|(&a, &b)| combine(a, b, alpha))
            .collect()
    }
}

/// Both fitted channels.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Channels {
    pub textual: TextualChannel,
    pub nontextual: NonTextualChannel,
}

impl Channels {
    /// Fits vectorizers, encoder and learners on `candidates` only.
    pub fn fit(
        candidates: &[LinkCandidate],
        source: &dyn RecordSource,
        config: &Config,
        resources: &Resources,
    ) -> Result<Channels> {
        let labels: Vec<bool> = candidates.iter().map(|c| c.label).collect();
        let (textual, nontextual) = rayon::join(
            || -> Result<TextualChannel> {
                let vectorizer = TextualVectorizer::fit(candidates, source, &resources.stopwords, config.max_features)?;
                let x = vectorizer.featurize_all(candidates, source)?;
                let learner = train(&config.textual, &x, &labels)?;
                Ok(TextualChannel { vectorizer, learner })
            },
            || -> Result<NonTextualChannel> {
                let encoder = TabularEncoder::fit(candidates, source, resources.categories.clone(), &config.tabular())?;
                let x = encoder.featurize_all(candidates, source)?;
                let ensemble = SoftVoteEnsemble::train(config.ensemble, &config.member_params(), &x, &labels)?;
                Ok(NonTextualChannel { encoder, ensemble })
            },
        );
        Ok(Channels {
            textual: textual?,
            nontextual: nontextual?,
        })
    }

    pub fn score(&self, candidates: &[LinkCandidate], source: &dyn RecordSource) -> Result<ChannelScores> {
        let xt = self.textual.vectorizer.featurize_all(candidates, source)?;
        let xn = self.nontextual.encoder.featurize_all(candidates, source)?;
        Ok(ChannelScores {
            p_nt: self.nontextual.ensemble.predict_proba_all(&xn)?,
            p_t: self.textual.learner.predict_proba_all(&xt)?,
        })
    }
}

/// Splits `candidates` into fit and validation parts with a seeded shuffle.
/// The validation part holds `round(fraction * n)` candidates (at least one).
pub fn fit_validation_split(
    candidates: &[LinkCandidate],
    fraction: f64,
    seed: u64,
) -> Result<(Vec<LinkCandidate>, Vec<LinkCandidate>)> {
    if candidates.len() < MIN_TRAINING_CANDIDATES {
        return Err(Error::Training(format!(
            "{} candidates; at least {MIN_TRAINING_CANDIDATES} are needed for the fit/validation split",
            candidates.len()
        )));
    }
    let n = candidates.len();
    let n_val = ((fraction * n as f64).round() as usize).clamp(1, n - 2);
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let validation = order[..n_val].iter().map(|&i| candidates[i].clone()).collect();
    let fit = order[n_val..].iter().map(|&i| candidates[i].clone()).collect();
    Ok((fit, validation))
}

/// One scored pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Prediction {
    pub p_nt: f64,
    pub p_t: f64,
    pub p_f: f64,
    pub label: bool,
}

/// The full trained pipeline.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HybridModel {
    pub project: String,
    pub channels: Channels,
    pub alpha: f64,
    pub threshold: f64,
    /// Validation F1 at the chosen α.
    pub validation_f1: f64,
    /// Configuration the model was trained with.
    pub config: Config,
    /// Corpus directory recorded at training time, if known.
    pub corpus_path: Option<PathBuf>,
}

/// Fits both channels on a seeded 80% part and tunes α on the remaining 20%.
pub fn train_hybrid(candidates: &[LinkCandidate], source: &dyn RecordSource, config: &Config) -> Result<HybridModel> {
    config.validate()?;
    let resources = config.load_resources()?;
    train_hybrid_with(candidates, source, config, &resources)
}

pub fn train_hybrid_with(
    candidates: &[LinkCandidate],
    source: &dyn RecordSource,
    config: &Config,
    resources: &Resources,
) -> Result<HybridModel> {
    let (fit, validation) = fit_validation_split(candidates, config.validation_fraction, config.split_seed)?;
    let channels = Channels::fit(&fit, source, config, resources)?;
    let scores = channels.score(&validation, source)?;
    let labels: Vec<bool> = validation.iter().map(|c| c.label).collect();
    let choice = tune_alpha_with(&scores.p_nt, &scores.p_t, &labels, config.alpha_steps, config.threshold)?;
    let project = source.issue(&fit[0].issue_id)?.project.clone();
    Ok(HybridModel {
        project,
        channels,
        alpha: choice.alpha,
        threshold: config.threshold,
        validation_f1: choice.f1,
        config: config.clone(),
        corpus_path: None,
    })
}

impl HybridModel {
    /// The same model with a different fusion weight.
    pub fn with_alpha(&self, alpha: f64) -> Result<HybridModel> {
        check_probability("alpha", alpha)?;
        Ok(HybridModel { alpha, ..self.clone() })
    }

    fn decide(&self, p_nt: f64, p_t: f64) -> Result<Prediction> {
        let p_f = combine(p_nt, p_t, self.alpha)?;
        Ok(Prediction {
            p_nt,
            p_t,
            p_f,
            label: p_f >= self.threshold,
        })
    }

    pub fn predict(&self, issue_id: &str, commit_hash: &str, source: &dyn RecordSource) -> Result<Prediction> {
        let pair = LinkCandidate::generated_false(issue_id, commit_hash);
        let xt = self.channels.textual.vectorizer.featurize(&pair, source)?;
        let xn = self.channels.nontextual.encoder.featurize(&pair, source)?.to_sparse();
        let p_t = self.channels.textual.learner.predict_proba(&xt)?;
        let p_nt = self.channels.nontextual.ensemble.predict_proba(&xn)?;
        self.decide(p_nt, p_t)
    }

    /// Scores many pairs; candidate labels are ignored.
    pub fn predict_all(&self, pairs: &[LinkCandidate], source: &dyn RecordSource) -> Result<Vec<Prediction>> {
        let scores = self.channels.score(pairs, source)?;
        scores
            .p_nt
            .iter()
            .zip(&scores.p_t)
            .map(|(&a, &b)| self.decide(a, b))
            .collect()
    }

    /// Confusion metrics of [`predict_all`](Self::predict_all) against candidate labels.
    pub fn evaluate(&self, candidates: &[LinkCandidate], source: &dyn RecordSource) -> Result<Metrics> {
        let predicted: Vec<bool> = self.predict_all(candidates, source)?.iter().map(|p| p.label).collect();
        let labels: Vec<bool> = candidates.iter().map(|c| c.label).collect();
        metrics(&predicted, &labels)
    }
}
