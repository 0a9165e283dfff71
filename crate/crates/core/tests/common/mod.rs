// SPDX-License-Identifier: Apache-2.0
#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap};

use linkrec::corpus::{Commit, Issue, RecordKey, RecordSource, Timestamp};
use linkrec::learn::LearnerParams;
use linkrec::linkgen::{self, LinkCandidate, Window};
use linkrec::{balance, synthesize_corpus, Config, Corpus, Error, Result, SignalParams};

pub const DAY: i64 = 86_400;
/// 2020-01-01T00:00:00Z
pub const T0: i64 = 1_577_836_800;

pub fn issue(id: &str, created: i64, updated: i64, resolved: Option<i64>) -> Issue {
    Issue {
        issue_id: id.to_string(),
        project: "P".into(),
        summary: format!("summary of {id}"),
        description: String::new(),
        raw_type: "Bug".into(),
        raw_status: "Closed".into(),
        created_date: Timestamp(created),
        updated_date: Timestamp(updated),
        resolved_date: resolved.map(Timestamp),
        reporter: "r".into(),
        creator: "r".into(),
    }
}

pub fn commit(hash: &str, author: i64, committed: i64, links: &[&str]) -> Commit {
    Commit {
        commit_hash: hash.to_string(),
        project: "P".into(),
        message: format!("change {hash}"),
        diff_text: String::new(),
        author: "a".into(),
        committer: "a".into(),
        author_time_date: Timestamp(author),
        commit_time_date: Timestamp(committed),
        linked_issue_ids: links.iter().map(|s| s.to_string()).collect(),
    }
}

/// Balanced candidates from a synthetic corpus.
pub fn synthetic(seed: u64, n: usize, signal: SignalParams) -> (Corpus, Vec<LinkCandidate>) {
    let corpus = synthesize_corpus(seed, n, n, signal).unwrap();
    let pool = linkgen::candidate_pool(&corpus, Window::Days(7));
    let balanced = balance(&pool, seed).unwrap();
    (corpus, balanced.candidates)
}

/// Default configuration with a lighter textual booster, for quick tests.
pub fn quick_config(seed: u64) -> Config {
    let mut c = Config::seeded(seed);
    c.textual = LearnerParams {
        n_trees: 20,
        max_depth: 8,
        ..LearnerParams::textual_gradient_boosting()
    }
    .with_seed(seed);
    c
}

/// Serves only an allow-listed subset of a corpus.
pub struct Restricted<'a> {
    pub corpus: &'a Corpus,
    pub allowed: BTreeSet<RecordKey>,
}

impl<'a> Restricted<'a> {
    pub fn to(corpus: &'a Corpus, candidates: &[LinkCandidate]) -> Self {
        Restricted {
            corpus,
            allowed: record_keys(candidates),
        }
    }
}

impl RecordSource for Restricted<'_> {
    fn issue(&self, id: &str) -> Result<&Issue> {
        if !self.allowed.contains(&RecordKey::Issue(id.into())) {
            return Err(Error::UnknownIssue(id.into()));
        }
        self.corpus.issue(id)
    }

    fn commit(&self, hash: &str) -> Result<&Commit> {
        if !self.allowed.contains(&RecordKey::Commit(hash.into())) {
            return Err(Error::UnknownCommit(hash.into()));
        }
        self.corpus.commit(hash)
    }
}

pub fn record_keys(candidates: &[LinkCandidate]) -> BTreeSet<RecordKey> {
    candidates
        .iter()
        .flat_map(|c| {
            [
                RecordKey::Issue(c.issue_id.clone()),
                RecordKey::Commit(c.commit_hash.clone()),
            ]
        })
        .collect()
}

/// Independent n-gram counter: 1- to 3-grams joined by single spaces.
pub fn count_ngrams(tokens: &[&str]) -> HashMap<String, usize> {
    let mut out = HashMap::new();
    for n in 1..=3 {
        if tokens.len() < n {
            continue;
        }
        for start in 0..=tokens.len() - n {
            *out.entry(tokens[start..start + n].join(" ")).or_insert(0) += 1;
        }
    }
    out
}
