// SPDX-License-Identifier: Apache-2.0

//! Recovering missing links between issue-tracker records and commits.
//!
//! The pipeline pairs every linked commit with unlinked issues in a
//! temporal window, balances the result, then scores each pair with a
//! textual channel (TF-IDF over issue text, commit message and diff code
//! terms) and a non-textual channel (dates, categories, identities). The
//! two probabilities are blended with a tuned weight α.

pub mod config;
pub mod corpus;
pub mod error;
pub mod eval;
pub mod features;
pub mod hybrid;
pub mod learn;
pub mod linkgen;
pub mod synth;
pub mod tabular;
pub mod textprep;
pub mod tfidf;

pub use config::{Config, Resources, Seeds, TuneOn};
pub use corpus::{
    load_corpus, load_corpus_dir, AuditedSource, Commit, Corpus, Issue, RecordKey, RecordSource, Timestamp,
};
pub use error::{Error, Result};
pub use eval::{
    ablation, cross_validate, kfold, metrics, stratified_kfold, Ablation, Fold, Metrics, MetricsReport, Report,
};
pub use features::SparseVector;
pub use hybrid::{combine, train_hybrid, tune_alpha, AlphaChoice, HybridModel, Prediction};
pub use learn::{
    make_ensemble, train, Classifier, EnsembleKind, LearnerParams, SoftVoteEnsemble, TrainedLearner, Variant,
};
pub use linkgen::{balance, enumerate_true_links, generate_false_links, LinkCandidate, Provenance, Window};
pub use synth::{synthesize_corpus, SignalParams};
pub use tabular::{CategoryMap, TabularEncoder};
pub use textprep::{StopWords, TextPreprocessor};
pub use tfidf::{TextualVectorizer, TfidfModel};
