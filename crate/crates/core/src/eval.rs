// SPDX-License-Identifier: Apache-2.0

//! Precision/recall/F1, k-fold splits and the cross-validation report.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::{Config, Seeds, TuneOn};
use crate::corpus::RecordSource;
use crate::error::{Error, Result};
use crate::hybrid::{fit_validation_split, tune_alpha_with, ChannelScores, Channels};
use crate::linkgen::LinkCandidate;

/// Confusion counts and the derived scores. A score whose denominator is
/// zero is reported as 0 with its `*_undefined` flag set.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Metrics {
    pub tp: usize,
    pub fp: usize,
    #[serde(rename = "fn")]
    pub fn_: usize,
    pub tn: usize,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub precision_undefined: bool,
    pub recall_undefined: bool,
    pub f1_undefined: bool,
}

impl Metrics {
    pub fn from_counts(tp: usize, fp: usize, fn_: usize, tn: usize) -> Metrics {
        let ratio = |num: usize, den: usize| {
            if den == 0 {
                (0.0, true)
            } else {
                (num as f64 / den as f64, false)
            }
        };
        let (precision, precision_undefined) = ratio(tp, tp + fp);
        let (recall, recall_undefined) = ratio(tp, tp + fn_);
        let (f1, f1_undefined) = if precision + recall > 0.0 {
            (2.0 * precision * recall / (precision + recall), false)
        } else {
            (0.0, true)
        };
        Metrics {
            tp,
            fp,
            fn_,
            tn,
            precision,
            recall,
            f1,
            precision_undefined,
            recall_undefined,
            f1_undefined,
        }
    }

    pub fn total(&self) -> usize {
        self.tp + self.fp + self.fn_ + self.tn
    }
}

pub fn metrics(predicted: &[bool], actual: &[bool]) -> Result<Metrics> {
    if predicted.len() != actual.len() {
        return Err(Error::param(format!(
            "{} predictions for {} labels",
            predicted.len(),
            actual.len()
        )));
    }
    if predicted.is_empty() {
        return Err(Error::param("metrics need at least one prediction"));
    }
    let (mut tp, mut fp, mut fn_, mut tn) = (0, 0, 0, 0);
    for (&p, &a) in predicted.iter().zip(actual) {
        match (p, a) {
            (true, true) => tp += 1,
            (true, false) => fp += 1,
            (false, true) => fn_ += 1,
            (false, false) => tn += 1,
        }
    }
    Ok(Metrics::from_counts(tp, fp, fn_, tn))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fold {
    pub train: Vec<usize>,
    pub test: Vec<usize>,
}

fn folds_from_parts(n: usize, parts: Vec<Vec<usize>>) -> Vec<Fold> {
    let mut owner = vec![0usize; n];
    for (f, part) in parts.iter().enumerate() {
        for &i in part {
            owner[i] = f;
        }
    }
    parts
        .into_iter()
        .enumerate()
        .map(|(f, mut test)| {
            test.sort_unstable();
            Fold {
                train: (0..n).filter(|&i| owner[i] != f).collect(),
                test,
            }
        })
        .collect()
}

fn check_k(n: usize, k: usize) -> Result<()> {
    if k < 2 {
        return Err(Error::param("k must be at least 2"));
    }
    if n < k {
        return Err(Error::param(format!("{n} items cannot fill {k} folds")));
    }
    Ok(())
}

/// Seeded permutation of `0..n` cut into `k` parts whose sizes differ by at
/// most one; part `f` is the test set of fold `f`.
pub fn kfold(n: usize, k: usize, seed: u64) -> Result<Vec<Fold>> {
    check_k(n, k)?;
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let parts = (0..k).map(|f| order[f * n / k..(f + 1) * n / k].to_vec()).collect();
    Ok(folds_from_parts(n, parts))
}

/// Like [`kfold`] but deals each class round-robin so every part gets a
/// near-equal share of positives.
pub fn stratified_kfold(labels: &[bool], k: usize, seed: u64) -> Result<Vec<Fold>> {
    let n = labels.len();
    check_k(n, k)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut parts = vec![Vec::new(); k];
    let mut next = 0;
    for class in [true, false] {
        let mut members: Vec<usize> = (0..n).filter(|&i| labels[i] == class).collect();
        members.shuffle(&mut rng);
        for i in members {
            parts[next % k].push(i);
            next += 1;
        }
    }
    Ok(folds_from_parts(n, parts))
}

/// Mean and population standard deviation of one score across folds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Spread {
    pub mean: f64,
    pub std: f64,
}

impl Spread {
    pub fn of(values: &[f64]) -> Spread {
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
        Spread { mean, std: var.sqrt() }
    }
}

/// Per-fold metrics with their mean, spread and pooled confusion counts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    pub per_fold: Vec<Metrics>,
    pub precision: Spread,
    pub recall: Spread,
    pub f1: Spread,
    pub pooled: Metrics,
}

impl MetricsReport {
    pub fn from_folds(per_fold: Vec<Metrics>) -> MetricsReport {
        let col = |f: fn(&Metrics) -> f64| per_fold.iter().map(f).collect::<Vec<_>>();
        let sum = |f: fn(&Metrics) -> usize| per_fold.iter().map(f).sum::<usize>();
        MetricsReport {
            precision: Spread::of(&col(|m| m.precision)),
            recall: Spread::of(&col(|m| m.recall)),
            f1: Spread::of(&col(|m| m.f1)),
            pooled: Metrics::from_counts(sum(|m| m.tp), sum(|m| m.fp), sum(|m| m.fn_), sum(|m| m.tn)),
            per_fold,
        }
    }

    pub fn mean_f1(&self) -> f64 {
        self.f1.mean
    }
}

/// One fold of cross-validation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FoldResult {
    pub fold: usize,
    pub n_train: usize,
    pub n_test: usize,
    pub split_seed: u64,
    pub alpha: f64,
    /// F1 on the set α was tuned on.
    pub tuning_f1: f64,
    pub hybrid: Metrics,
    pub textual: Metrics,
    pub nontextual: Metrics,
}

/// Published averages over twelve projects, for orientation only. They
/// come from a dataset this tool does not ship and are not targets.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReferenceNumbers {
    pub note: String,
    pub hybrid_recall: f64,
    pub hybrid_precision: f64,
    pub hybrid_f1: f64,
    pub hybrid_f1_std: f64,
    pub textual_f1: f64,
    pub nontextual_f1: f64,
}

impl Default for ReferenceNumbers {
    fn default() -> Self {
        ReferenceNumbers {
            note: "published 12-project averages in percent; reference only, not reproducible here".into(),
            hybrid_recall: 90.14,
            hybrid_precision: 87.78,
            hybrid_f1: 88.88,
            hybrid_f1_std: 3.01,
            textual_f1: 80.82,
            nontextual_f1: 88.36,
        }
    }
}

/// Channel-only and hybrid results under identical folds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Ablation {
    /// α = 0.
    pub textual: MetricsReport,
    /// α = 1.
    pub nontextual: MetricsReport,
    pub hybrid: MetricsReport,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub tool: String,
    pub version: String,
    pub project: String,
    pub n_candidates: usize,
    pub n_true: usize,
    pub k: usize,
    pub stratified: bool,
    pub tune_on: TuneOn,
    pub seeds: Seeds,
    pub config: Config,
    pub folds: Vec<FoldResult>,
    pub alphas: Vec<f64>,
    /// Mean hybrid F1 across folds.
    pub mean_f1: f64,
    pub hybrid: MetricsReport,
    pub ablation: Option<Ablation>,
    pub reference: ReferenceNumbers,
}

impl Report {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

fn labels_of(candidates: &[LinkCandidate]) -> Vec<bool> {
    candidates.iter().map(|c| c.label).collect()
}

fn predictions(scores: &ChannelScores, alpha: f64, threshold: f64) -> Result<Vec<bool>> {
    Ok(scores.fused(alpha)?.into_iter().map(|p| p >= threshold).collect())
}

/// Trains on `train`, tunes α per `config.tune_on`, and scores `test`.
pub fn run_fold(
    fold: usize,
    train: &[LinkCandidate],
    test: &[LinkCandidate],
    source: &dyn RecordSource,
    config: &Config,
) -> Result<FoldResult> {
    let resources = config.load_resources()?;
    let split_seed = config.split_seed.wrapping_add(fold as u64);
    let test_labels = labels_of(test);
    let (test_scores, choice) = match config.tune_on {
        TuneOn::Validation => {
            let (fit, validation) = fit_validation_split(train, config.validation_fraction, split_seed)?;
            let channels = Channels::fit(&fit, source, config, &resources)?;
            let val_scores = channels.score(&validation, source)?;
            let choice = tune_alpha_with(
                &val_scores.p_nt,
                &val_scores.p_t,
                &labels_of(&validation),
                config.alpha_steps,
                config.threshold,
            )?;
            let test_scores = channels.score(test, source)?;
            (test_scores, choice)
        }
        TuneOn::Test => {
            let channels = Channels::fit(train, source, config, &resources)?;
            let test_scores = channels.score(test, source)?;
            let choice = tune_alpha_with(
                &test_scores.p_nt,
                &test_scores.p_t,
                &test_labels,
                config.alpha_steps,
                config.threshold,
            )?;
            (test_scores, choice)
        }
    };
    let at =
        |alpha: f64| -> Result<Metrics> { metrics(&predictions(&test_scores, alpha, config.threshold)?, &test_labels) };
    Ok(FoldResult {
        fold,
        n_train: train.len(),
        n_test: test.len(),
        split_seed,
        alpha: choice.alpha,
        tuning_f1: choice.f1,
        hybrid: at(choice.alpha)?,
        textual: at(0.0)?,
        nontextual: at(1.0)?,
    })
}

/// The folds `cross_validate` uses for these candidates and settings.
pub fn folds_for(candidates: &[LinkCandidate], config: &Config) -> Result<Vec<Fold>> {
    if config.stratified {
        stratified_kfold(&labels_of(candidates), config.folds, config.fold_seed)
    } else {
        kfold(candidates.len(), config.folds, config.fold_seed)
    }
}

/// Full pipeline per fold (fit on train, tune α, score test). Folds run in
/// parallel; each owns its seeds so the result matches a sequential run.
pub fn cross_validate(
    candidates: &[LinkCandidate],
    source: &dyn RecordSource,
    config: &Config,
    with_ablation: bool,
) -> Result<Report> {
    config.validate()?;
    let folds = folds_for(candidates, config)?;
    let pick = |idx: &[usize]| idx.iter().map(|&i| candidates[i].clone()).collect::<Vec<_>>();
    let results = folds
        .par_iter()
        .enumerate()
        .map(|(f, fold)| run_fold(f, &pick(&fold.train), &pick(&fold.test), source, config))
        .collect::<Result<Vec<_>>>()?;

    let project = match candidates.first() {
        Some(c) => source.issue(&c.issue_id)?.project.clone(),
        None => String::new(),
    };
    let report_of = |f: fn(&FoldResult) -> Metrics| MetricsReport::from_folds(results.iter().map(f).collect());
    let hybrid = report_of(|r| r.hybrid);
    let ablation = with_ablation.then(|| Ablation {
        textual: report_of(|r| r.textual),
        nontextual: report_of(|r| r.nontextual),
        hybrid: hybrid.clone(),
    });
    Ok(Report {
        tool: "linkrec".into(),
        version: env!("CARGO_PKG_VERSION").into(),
        project,
        n_candidates: candidates.len(),
        n_true: candidates.iter().filter(|c| c.label).count(),
        k: config.folds,
        stratified: config.stratified,
        tune_on: config.tune_on,
        seeds: config.seeds(),
        config: config.clone(),
        alphas: results.iter().map(|r| r.alpha).collect(),
        folds: results,
        mean_f1: hybrid.f1.mean,
        hybrid,
        ablation,
        reference: ReferenceNumbers::default(),
    })
}

/// Textual-only, non-textual-only and tuned hybrid reports under identical folds.
pub fn ablation(candidates: &[LinkCandidate], source: &dyn RecordSource, config: &Config) -> Result<Ablation> {
    Ok(cross_validate(candidates, source, config, true)?
        .ablation
        .expect("requested ablation"))
}
