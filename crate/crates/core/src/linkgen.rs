// SPDX-License-Identifier: Apache-2.0

//! Labeled issue-commit candidates: developer links, temporally plausible
//! false links, and class balancing.

use std::fmt;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;
use std::str::FromStr;

use rand::seq::{index, SliceRandom};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::corpus::{Commit, Corpus, Issue, SECONDS_PER_DAY};
use crate::error::{Error, Result};

pub const DEFAULT_WINDOW_DAYS: u32 = 7;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    DeveloperLink,
    GeneratedFalse,
}

impl Provenance {
    pub fn as_str(self) -> &'static str {
        match self {
            Provenance::DeveloperLink => "developer_link",
            Provenance::GeneratedFalse => "generated_false",
        }
    }
}

impl FromStr for Provenance {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "developer_link" => Ok(Provenance::DeveloperLink),
            "generated_false" => Ok(Provenance::GeneratedFalse),
            other => Err(format!("unknown provenance `{other}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct LinkCandidate {
    pub issue_id: String,
    pub commit_hash: String,
    pub label: bool,
    pub provenance: Provenance,
}

impl LinkCandidate {
    pub fn developer_link(issue_id: &str, commit_hash: &str) -> Self {
        LinkCandidate {
            issue_id: issue_id.to_string(),
            commit_hash: commit_hash.to_string(),
            label: true,
            provenance: Provenance::DeveloperLink,
        }
    }

    pub fn generated_false(issue_id: &str, commit_hash: &str) -> Self {
        LinkCandidate {
            issue_id: issue_id.to_string(),
            commit_hash: commit_hash.to_string(),
            label: false,
            provenance: Provenance::GeneratedFalse,
        }
    }

    fn sort_key(&self) -> (&str, &str) {
        (&self.commit_hash, &self.issue_id)
    }
}

impl fmt::Display for LinkCandidate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}\t{}\t{}\t{}",
            self.issue_id,
            self.commit_hash,
            self.label,
            self.provenance.as_str()
        )
    }
}

/// Temporal window used when pairing a commit with unlinked issues.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Window {
    Days(u32),
    Unbounded,
}

impl Default for Window {
    fn default() -> Self {
        Window::Days(DEFAULT_WINDOW_DAYS)
    }
}

impl Window {
    fn seconds(self) -> Option<u64> {
        match self {
            Window::Days(d) => Some(d as u64 * SECONDS_PER_DAY as u64),
            Window::Unbounded => None,
        }
    }
}

/// True when any of the commit's two dates lies within the window of any
/// of the issue's dates (inclusive).
pub fn in_window(issue: &Issue, commit: &Commit, window: Window) -> bool {
    let Some(limit) = window.seconds() else {
        return true;
    };
    commit
        .dates()
        .iter()
        .any(|&c| issue.dates().any(|i| c.abs_diff_secs(i) <= limit))
}

/// One candidate per (commit, linked issue) pair, sorted by commit hash then issue id.
pub fn enumerate_true_links(corpus: &Corpus) -> Vec<LinkCandidate> {
    let mut out: Vec<LinkCandidate> = corpus
        .commits()
        .iter()
        .flat_map(|c| {
            c.linked_issue_ids
                .iter()
                .map(move |id| LinkCandidate::developer_link(id, &c.commit_hash))
        })
        .collect();
    out.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));
    out
}

/// Pairs every already-linked commit with each unlinked issue inside the window.
pub fn generate_false_links(corpus: &Corpus, window: Window) -> Vec<LinkCandidate> {
    let issues = corpus.issues();
    // (date, issue index) over all issue dates, sorted for range queries.
    let mut timeline: Vec<(i64, usize)> = issues
        .iter()
        .enumerate()
        .flat_map(|(i, issue)| issue.dates().map(move |d| (d.0, i)))
        .collect();
    timeline.sort_unstable();

    let mut out: Vec<LinkCandidate> = corpus
        .commits()
        .par_iter()
        .filter(|c| !c.linked_issue_ids.is_empty())
        .flat_map_iter(|commit| {
            let mut hits: Vec<usize> = match window.seconds() {
                None => (0..issues.len()).collect(),
                Some(limit) => {
                    let limit = limit as i64;
                    let mut hits = Vec::new();
                    for date in commit.dates() {
                        let lo = timeline.partition_point(|&(d, _)| d < date.0.saturating_sub(limit));
                        let hi = timeline.partition_point(|&(d, _)| d <= date.0.saturating_add(limit));
                        hits.extend(timeline[lo..hi].iter().map(|&(_, i)| i));
                    }
                    hits.sort_unstable();
                    hits.dedup();
                    hits
                }
            };
            hits.retain(|&i| !commit.linked_issue_ids.contains(&issues[i].issue_id));
            hits.into_iter()
                .map(|i| LinkCandidate::generated_false(&issues[i].issue_id, &commit.commit_hash))
        })
        .collect();
    out.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));
    out
}

/// Balanced candidate set; `deficit` counts missing false candidates when
/// there were fewer false than true candidates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Balanced {
    pub candidates: Vec<LinkCandidate>,
    pub n_true: usize,
    pub n_false: usize,
    pub deficit: usize,
}

/// Keeps every true candidate plus an equally sized seeded sample of false ones,
/// then shuffles the result with the same seed.
pub fn balance(candidates: &[LinkCandidate], seed: u64) -> Result<Balanced> {
    let (trues, falses): (Vec<&LinkCandidate>, Vec<&LinkCandidate>) = candidates.iter().partition(|c| c.label);
    if trues.is_empty() {
        return Err(Error::Training("no true links to balance against".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let take = trues.len().min(falses.len());
    let mut picked: Vec<usize> = index::sample(&mut rng, falses.len(), take).into_vec();
    picked.sort_unstable();

    let mut out: Vec<LinkCandidate> = trues.iter().map(|&c| c.clone()).collect();
    out.extend(picked.into_iter().map(|i| falses[i].clone()));
    out.shuffle(&mut rng);
    Ok(Balanced {
        n_true: trues.len(),
        n_false: take,
        deficit: trues.len() - take,
        candidates: out,
    })
}

/// All true links plus the window-generated false links, in canonical order.
pub fn candidate_pool(corpus: &Corpus, window: Window) -> Vec<LinkCandidate> {
    let mut all = enumerate_true_links(corpus);
    all.extend(generate_false_links(corpus, window));
    all.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));
    all
}

/// Writes one tab-separated candidate per line:
/// `issue_id  commit_hash  label  provenance`.
pub fn write_candidates(path: &Path, candidates: &[LinkCandidate]) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(file);
    for c in candidates {
        writeln!(w, "{c}").map_err(|e| Error::io(path, e))?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

pub fn parse_candidate_line(line: &str) -> std::result::Result<LinkCandidate, String> {
    let fields: Vec<&str> = line.split('\t').collect();
    let [issue_id, commit_hash, label, provenance] = fields.as_slice() else {
        return Err(format!("expected 4 tab-separated fields, found {}", fields.len()));
    };
    let label: bool = label.parse().map_err(|_| format!("bad label `{label}`"))?;
    let provenance: Provenance = provenance.parse()?;
    if label != (provenance == Provenance::DeveloperLink) {
        return Err(format!("label {label} contradicts provenance {}", provenance.as_str()));
    }
    Ok(LinkCandidate {
        issue_id: issue_id.to_string(),
        commit_hash: commit_hash.to_string(),
        label,
        provenance,
    })
}

pub fn read_candidates(path: &Path) -> Result<Vec<LinkCandidate>> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut out = Vec::new();
    let mut seen = std::collections::HashSet::new();
    for (n, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|e| Error::io(path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        let c = parse_candidate_line(line.trim_end_matches('\r')).map_err(|message| Error::Parse {
            path: path.to_path_buf(),
            line: n + 1,
            message,
        })?;
        if !seen.insert((c.issue_id.clone(), c.commit_hash.clone())) {
            return Err(Error::DuplicateKey {
                kind: "candidate",
                key: format!("{} {}", c.issue_id, c.commit_hash),
            });
        }
        out.push(c);
    }
    Ok(out)
}
