// SPDX-License-Identifier: Apache-2.0

//! Dense non-textual features: dates, pairwise day gaps, reduced status and
//! type categories, and top-K one-hot identity columns.

use std::collections::{BTreeMap, HashMap};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::corpus::{Commit, Corpus, Issue, RecordSource};
use crate::error::{Error, Result};
use crate::features::SparseVector;
use crate::linkgen::LinkCandidate;

/// Shipped raw-label reduction table (`raw_label<TAB>reduced_class`).
pub const DEFAULT_CATEGORY_MAP: &str = include_str!("../data/category_map.tsv");

pub const DEFAULT_IDENTITY_TOP_K: usize = 50;
pub const DEFAULT_MISSING_THRESHOLD: f64 = 0.5;
pub const DEFAULT_REDUNDANCY_THRESHOLD: f64 = 0.99;

/// Substrings that must never appear in a feature name.
pub const LEAKAGE_DENYLIST: &[&str] = &["label", "provenance", "linked", "developer_link", "generated_false"];

const OTHER: &str = "OTHER";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum IssueStatus {
    Open,
    Closed,
    Resolved,
}

impl IssueStatus {
    pub const ALL: [IssueStatus; 3] = [IssueStatus::Open, IssueStatus::Closed, IssueStatus::Resolved];

    fn name(self) -> &'static str {
        match self {
            IssueStatus::Open => "open",
            IssueStatus::Closed => "closed",
            IssueStatus::Resolved => "resolved",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum IssueType {
    Task,
    NewFeature,
    Bug,
}

impl IssueType {
    pub const ALL: [IssueType; 3] = [IssueType::Task, IssueType::NewFeature, IssueType::Bug];

    fn name(self) -> &'static str {
        match self {
            IssueType::Task => "task",
            IssueType::NewFeature => "new_feature",
            IssueType::Bug => "bug",
        }
    }
}

/// Raw status/type label reduction. Lookups are case-insensitive; unknown
/// labels fall back to `open` and `task`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CategoryMap {
    status: BTreeMap<String, IssueStatus>,
    issue_type: BTreeMap<String, IssueType>,
}

impl Default for CategoryMap {
    fn default() -> Self {
        Self::parse(DEFAULT_CATEGORY_MAP).expect("shipped category map parses")
    }
}

impl CategoryMap {
    pub fn parse(text: &str) -> std::result::Result<Self, String> {
        let mut map = CategoryMap {
            status: BTreeMap::new(),
            issue_type: BTreeMap::new(),
        };
        for (n, line) in text.lines().enumerate() {
            let line = line.trim_end_matches('\r');
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((raw, class)) = line.split_once('\t') else {
                return Err(format!("line {}: expected `raw_label<TAB>reduced_class`", n + 1));
            };
            let raw = raw.trim().to_lowercase();
            match class.trim() {
                "open" => map.status.insert(raw, IssueStatus::Open).map(|_| ()),
                "closed" => map.status.insert(raw, IssueStatus::Closed).map(|_| ()),
                "resolved" => map.status.insert(raw, IssueStatus::Resolved).map(|_| ()),
                "task" => map.issue_type.insert(raw, IssueType::Task).map(|_| ()),
                "new_feature" => map.issue_type.insert(raw, IssueType::NewFeature).map(|_| ()),
                "bug" => map.issue_type.insert(raw, IssueType::Bug).map(|_| ()),
                other => return Err(format!("line {}: unknown reduced class `{other}`", n + 1)),
            };
        }
        Ok(map)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text).map_err(|message| Error::Parse {
            path: path.to_path_buf(),
            line: 0,
            message,
        })
    }

    pub fn lookup_status(&self, raw: &str) -> Option<IssueStatus> {
        self.status.get(&raw.trim().to_lowercase()).copied()
    }

    pub fn lookup_type(&self, raw: &str) -> Option<IssueType> {
        self.issue_type.get(&raw.trim().to_lowercase()).copied()
    }

    pub fn status(&self, raw: &str) -> IssueStatus {
        self.lookup_status(raw).unwrap_or(IssueStatus::Open)
    }

    pub fn issue_type(&self, raw: &str) -> IssueType {
        self.lookup_type(raw).unwrap_or(IssueType::Task)
    }

    pub fn n_statuses(&self) -> usize {
        self.status.len()
    }

    pub fn n_types(&self) -> usize {
        self.issue_type.len()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum IdentityField {
    Reporter,
    Creator,
    Author,
    Committer,
}

impl IdentityField {
    fn name(self) -> &'static str {
        match self {
            IdentityField::Reporter => "issue.reporter",
            IdentityField::Creator => "issue.creator",
            IdentityField::Author => "commit.author",
            IdentityField::Committer => "commit.committer",
        }
    }

    fn value<'a>(self, issue: &'a Issue, commit: &'a Commit) -> &'a str {
        match self {
            IdentityField::Reporter => &issue.reporter,
            IdentityField::Creator => &issue.creator,
            IdentityField::Author => &commit.author,
            IdentityField::Committer => &commit.committer,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TabularConfig {
    pub gap_features: bool,
    pub identity_top_k: usize,
    /// Columns with a larger fraction of missing values are excluded at fit time.
    pub missing_threshold: f64,
    /// Reporter is dropped when it equals the creator at least this often.
    pub redundancy_threshold: f64,
}

impl Default for TabularConfig {
    fn default() -> Self {
        TabularConfig {
            gap_features: true,
            identity_top_k: DEFAULT_IDENTITY_TOP_K,
            missing_threshold: DEFAULT_MISSING_THRESHOLD,
            redundancy_threshold: DEFAULT_REDUNDANCY_THRESHOLD,
        }
    }
}

/// Equality rates behind the reporter/creator and author/committer checks.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ColumnReport {
    pub reporter_creator_rate: f64,
    pub author_committer_rate: f64,
    pub threshold: f64,
    pub drop_reporter: bool,
}

fn equality_rate<'a>(pairs: impl Iterator<Item = (&'a str, &'a str)>) -> f64 {
    let (mut same, mut total) = (0usize, 0usize);
    for (a, b) in pairs {
        total += 1;
        same += usize::from(a == b);
    }
    if total == 0 {
        0.0
    } else {
        same as f64 / total as f64
    }
}

fn column_report<'a>(
    issues: impl Iterator<Item = &'a Issue>,
    commits: impl Iterator<Item = &'a Commit>,
    threshold: f64,
) -> ColumnReport {
    let reporter_creator_rate = equality_rate(issues.map(|i| (i.reporter.as_str(), i.creator.as_str())));
    let author_committer_rate = equality_rate(commits.map(|c| (c.author.as_str(), c.committer.as_str())));
    ColumnReport {
        reporter_creator_rate,
        author_committer_rate,
        threshold,
        drop_reporter: reporter_creator_rate >= threshold,
    }
}

/// Measures identity-column redundancy over a whole corpus. Author and
/// committer are always kept whatever their overlap.
pub fn drop_redundant_columns(corpus: &Corpus, threshold: f64) -> ColumnReport {
    column_report(corpus.issues().iter(), corpus.commits().iter(), threshold)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct IdentityColumn {
    field: IdentityField,
    vocab: Vec<String>,
}

impl IdentityColumn {
    fn width(&self) -> usize {
        self.vocab.len() + 1
    }

    fn slot(&self, value: &str) -> usize {
        self.vocab
            .binary_search_by(|v| v.as_str().cmp(value))
            .unwrap_or(self.vocab.len())
    }
}

/// Fit-time diagnostics: unmapped raw labels and excluded columns.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct EncoderReport {
    pub unmapped_statuses: BTreeMap<String, usize>,
    pub unmapped_types: BTreeMap<String, usize>,
    pub excluded_columns: Vec<String>,
    pub columns: Option<ColumnReport>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TabularEncoder {
    categories: CategoryMap,
    gap_features: bool,
    include_resolved: bool,
    identities: Vec<IdentityColumn>,
    names: Vec<String>,
    report: EncoderReport,
}

/// Dense non-textual vector; layout fixed by the encoder that produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct TabularFeatureVector(pub Vec<f64>);

impl TabularFeatureVector {
    pub fn to_sparse(&self) -> SparseVector {
        SparseVector::from_dense(&self.0)
    }
}

fn days_between(a: i64, b: i64) -> f64 {
    a.abs_diff(b) as f64 / crate::corpus::SECONDS_PER_DAY as f64
}

impl TabularEncoder {
    /// Fits identity vocabularies and the column layout on training candidates.
    pub fn fit(
        candidates: &[LinkCandidate],
        source: &dyn RecordSource,
        categories: CategoryMap,
        config: &TabularConfig,
    ) -> Result<Self> {
        let mut rows = Vec::with_capacity(candidates.len());
        for c in candidates {
            rows.push((source.issue(&c.issue_id)?, source.commit(&c.commit_hash)?));
        }
        let n = rows.len().max(1) as f64;
        let mut report = EncoderReport::default();

        let mut distinct_issues: Vec<&Issue> = rows.iter().map(|(i, _)| *i).collect();
        distinct_issues.sort_by(|a, b| a.issue_id.cmp(&b.issue_id));
        distinct_issues.dedup_by(|a, b| a.issue_id == b.issue_id);
        let mut distinct_commits: Vec<&Commit> = rows.iter().map(|(_, c)| *c).collect();
        distinct_commits.sort_by(|a, b| a.commit_hash.cmp(&b.commit_hash));
        distinct_commits.dedup_by(|a, b| a.commit_hash == b.commit_hash);
        let columns = column_report(
            distinct_issues.iter().copied(),
            distinct_commits.iter().copied(),
            config.redundancy_threshold,
        );

        for issue in &distinct_issues {
            if categories.lookup_status(&issue.raw_status).is_none() {
                *report.unmapped_statuses.entry(issue.raw_status.clone()).or_default() += 1;
            }
            if categories.lookup_type(&issue.raw_type).is_none() {
                *report.unmapped_types.entry(issue.raw_type.clone()).or_default() += 1;
            }
        }

        let missing_resolved = rows.iter().filter(|(i, _)| i.resolved_date.is_none()).count() as f64 / n;
        let include_resolved = missing_resolved <= config.missing_threshold;
        if !include_resolved {
            report.excluded_columns.push("issue.resolved_date".into());
        }

        let mut fields = vec![IdentityField::Creator, IdentityField::Author, IdentityField::Committer];
        if !columns.drop_reporter {
            fields.insert(0, IdentityField::Reporter);
        }
        let mut identities = Vec::new();
        for field in fields {
            let mut counts: HashMap<&str, usize> = HashMap::new();
            let mut missing = 0usize;
            for (issue, commit) in &rows {
                let v = field.value(issue, commit);
                if v.is_empty() {
                    missing += 1;
                } else {
                    *counts.entry(v).or_default() += 1;
                }
            }
            if missing as f64 / n > config.missing_threshold {
                report.excluded_columns.push(field.name().to_string());
                continue;
            }
            let mut ranked: Vec<(&str, usize)> = counts.into_iter().collect();
            ranked.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(b.0)));
            ranked.truncate(config.identity_top_k);
            let mut vocab: Vec<String> = ranked.into_iter().map(|(v, _)| v.to_string()).collect();
            vocab.sort();
            identities.push(IdentityColumn { field, vocab });
        }
        report.columns = Some(columns);

        let mut encoder = TabularEncoder {
            categories,
            gap_features: config.gap_features,
            include_resolved,
            identities,
            names: Vec::new(),
            report,
        };
        encoder.names = encoder.build_names();
        Ok(encoder)
    }

    fn build_names(&self) -> Vec<String> {
        let mut names: Vec<String> = [
            "commit.author_time_days",
            "commit.commit_time_days",
            "issue.created_days",
            "issue.updated_days",
        ]
        .iter()
        .map(|s| s.to_string())
        .collect();
        if self.include_resolved {
            names.push("issue.resolved_days".into());
            names.push("issue.resolved_present".into());
        }
        if self.gap_features {
            for c in ["author_time", "commit_time"] {
                for i in ["created", "updated", "resolved"] {
                    if i != "resolved" || self.include_resolved {
                        names.push(format!("gap_days.{c}-{i}"));
                    }
                }
            }
        }
        names.extend(IssueStatus::ALL.iter().map(|s| format!("issue.status={}", s.name())));
        names.extend(IssueType::ALL.iter().map(|t| format!("issue.type={}", t.name())));
        for col in &self.identities {
            names.extend(col.vocab.iter().map(|v| format!("{}={v}", col.field.name())));
            names.push(format!("{}={OTHER}", col.field.name()));
        }
        names
    }

    pub fn width(&self) -> usize {
        self.names.len()
    }

    pub fn feature_names(&self) -> &[String] {
        &self.names
    }

    pub fn report(&self) -> &EncoderReport {
        &self.report
    }

    pub fn encode(&self, issue: &Issue, commit: &Commit) -> TabularFeatureVector {
        let mut v = Vec::with_capacity(self.width());
        v.extend([
            commit.author_time_date.epoch_days(),
            commit.commit_time_date.epoch_days(),
            issue.created_date.epoch_days(),
            issue.updated_date.epoch_days(),
        ]);
        if self.include_resolved {
            match issue.resolved_date {
                Some(r) => v.extend([r.epoch_days(), 1.0]),
                None => v.extend([0.0, 0.0]),
            }
        }
        if self.gap_features {
            for c in commit.dates() {
                v.push(days_between(c.0, issue.created_date.0));
                v.push(days_between(c.0, issue.updated_date.0));
                if self.include_resolved {
                    v.push(issue.resolved_date.map_or(0.0, |r| days_between(c.0, r.0)));
                }
            }
        }
        let status = self.categories.status(&issue.raw_status);
        v.extend(IssueStatus::ALL.iter().map(|&s| f64::from(u8::from(s == status))));
        let ty = self.categories.issue_type(&issue.raw_type);
        v.extend(IssueType::ALL.iter().map(|&t| f64::from(u8::from(t == ty))));
        for col in &self.identities {
            let mut block = vec![0.0; col.width()];
            block[col.slot(col.field.value(issue, commit))] = 1.0;
            v.extend(block);
        }
        debug_assert_eq!(v.len(), self.width());
        TabularFeatureVector(v)
    }

    pub fn featurize(&self, candidate: &LinkCandidate, source: &dyn RecordSource) -> Result<TabularFeatureVector> {
        let issue = source.issue(&candidate.issue_id)?;
        let commit = source.commit(&candidate.commit_hash)?;
        Ok(self.encode(issue, commit))
    }

    pub fn featurize_all(&self, candidates: &[LinkCandidate], source: &dyn RecordSource) -> Result<Vec<SparseVector>> {
        candidates
            .iter()
            .map(|c| self.featurize(c, source).map(|v| v.to_sparse()))
            .collect()
    }

    /// Column ranges of the one-hot blocks (status, type, then identities).
    pub fn one_hot_blocks(&self) -> Vec<std::ops::Range<usize>> {
        let mut start = self.width() - 6 - self.identities.iter().map(IdentityColumn::width).sum::<usize>();
        let mut blocks = vec![start..start + 3, start + 3..start + 6];
        start += 6;
        for col in &self.identities {
            blocks.push(start..start + col.width());
            start += col.width();
        }
        blocks
    }

    /// Column ranges of the day-gap features, if enabled.
    pub fn gap_columns(&self) -> Vec<usize> {
        self.names
            .iter()
            .enumerate()
            .filter(|(_, n)| n.starts_with("gap_days."))
            .map(|(i, _)| i)
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::fixtures::*;

    fn corpus(creators: &[&str]) -> (Corpus, Vec<LinkCandidate>) {
        let issues: Vec<Issue> = creators
            .iter()
            .enumerate()
            .map(|(k, who)| {
                let mut i = issue(&format!("I{k}"), "2014-12-08T00:00:00Z");
                i.creator = who.to_string();
                i.reporter = who.to_string();
                i.resolved_date = Some(ts("2014-12-11T00:00:00Z"));
                i
            })
            .collect();
        let commits = vec![commit("C1", "2014-12-10T00:00:00Z", &["I0"])];
        let cands = (0..creators.len())
            .map(|k| LinkCandidate::generated_false(&format!("I{k}"), "C1"))
            .collect();
        (Corpus::new("P", issues, commits).unwrap(), cands)
    }

    #[test]
    fn shipped_map_rows() {
        let m = CategoryMap::default();
        assert_eq!(m.n_statuses(), 11);
        assert_eq!(m.n_types(), 15);
        assert_eq!(m.lookup_type("Bug"), Some(IssueType::Bug));
        assert_eq!(m.lookup_type("Improvement"), Some(IssueType::Task));
        assert_eq!(m.lookup_type("new feature"), Some(IssueType::NewFeature));
        assert_eq!(m.lookup_status("Closed"), Some(IssueStatus::Closed));
        assert_eq!(m.lookup_status("Resolved"), Some(IssueStatus::Resolved));
        assert_eq!(m.lookup_status("Reopened"), Some(IssueStatus::Open));
        assert_eq!(m.status("Mystery"), IssueStatus::Open);
        assert_eq!(m.issue_type("Mystery"), IssueType::Task);
        for line in DEFAULT_CATEGORY_MAP.lines().filter(|l| !l.starts_with('#')) {
            let (raw, _) = line.split_once('\t').unwrap();
            assert!(m.lookup_status(raw).is_some() || m.lookup_type(raw).is_some(), "{raw}");
        }
    }

    #[test]
    fn bad_map_lines_rejected() {
        assert!(CategoryMap::parse("Bug\tbroken").is_err());
        assert!(CategoryMap::parse("no tab here").is_err());
    }

    #[test]
    fn creator_block_width() {
        let (c, cands) = corpus(&["x", "y", "z"]);
        let enc = TabularEncoder::fit(&cands, &c, CategoryMap::default(), &TabularConfig::default()).unwrap();
        let creator: Vec<&String> = enc
            .feature_names()
            .iter()
            .filter(|n| n.starts_with("issue.creator="))
            .collect();
        assert_eq!(creator.len(), 4);
        // reporter always equals creator here, so it is dropped
        assert!(!enc.feature_names().iter().any(|n| n.starts_with("issue.reporter")));
    }

    #[test]
    fn unseen_identity_goes_to_other() {
        let (c, cands) = corpus(&["x", "y"]);
        let enc = TabularEncoder::fit(&cands, &c, CategoryMap::default(), &TabularConfig::default()).unwrap();
        let mut i = c.get_issue("I0").unwrap().clone();
        i.creator = "never-seen".into();
        let v = enc.encode(&i, c.get_commit("C1").unwrap());
        let other = enc
            .feature_names()
            .iter()
            .position(|n| n == "issue.creator=OTHER")
            .unwrap();
        assert_eq!(v.0[other], 1.0);
    }

    #[test]
    fn motivating_dates_give_two_day_gap() {
        let (c, cands) = corpus(&["x"]);
        let enc = TabularEncoder::fit(&cands, &c, CategoryMap::default(), &TabularConfig::default()).unwrap();
        let v = enc.featurize(&cands[0], &c).unwrap();
        let at = |name: &str| v.0[enc.feature_names().iter().position(|n| n == name).unwrap()];
        assert_eq!(at("gap_days.commit_time-created"), 2.0);
        assert_eq!(at("gap_days.commit_time-resolved"), 1.0);
        assert_eq!(at("issue.status=closed"), 1.0);
        assert_eq!(at("issue.status=open"), 0.0);
        assert_eq!(at("issue.status=resolved"), 0.0);
        assert_eq!(at("issue.type=bug"), 1.0);
        assert_eq!(at("issue.resolved_present"), 1.0);
    }

    #[test]
    fn equal_dates_give_zero_gap() {
        let (c, cands) = corpus(&["x"]);
        let mut i = c.get_issue("I0").unwrap().clone();
        i.created_date = c.get_commit("C1").unwrap().commit_time_date;
        i.updated_date = i.created_date;
        let enc = TabularEncoder::fit(&cands, &c, CategoryMap::default(), &TabularConfig::default()).unwrap();
        let v = enc.encode(&i, c.get_commit("C1").unwrap());
        let idx = enc
            .feature_names()
            .iter()
            .position(|n| n == "gap_days.commit_time-created")
            .unwrap();
        assert_eq!(v.0[idx], 0.0);
    }

    #[test]
    fn gap_features_toggle() {
        let (c, cands) = corpus(&["x"]);
        let with = TabularEncoder::fit(&cands, &c, CategoryMap::default(), &TabularConfig::default()).unwrap();
        let config = TabularConfig {
            gap_features: false,
            ..TabularConfig::default()
        };
        let without = TabularEncoder::fit(&cands, &c, CategoryMap::default(), &config).unwrap();
        assert_eq!(with.width() - without.width(), 6);
        assert!(without.gap_columns().is_empty());
    }

    #[test]
    fn mostly_missing_resolved_is_excluded() {
        let (c, cands) = corpus(&["x", "y", "z"]);
        let issues: Vec<Issue> = c
            .issues()
            .iter()
            .map(|i| Issue {
                resolved_date: None,
                ..i.clone()
            })
            .collect();
        let c = Corpus::new("P", issues, c.commits().to_vec()).unwrap();
        let enc = TabularEncoder::fit(&cands, &c, CategoryMap::default(), &TabularConfig::default()).unwrap();
        assert!(!enc.feature_names().iter().any(|n| n.contains("resolved_")));
        assert_eq!(enc.report().excluded_columns, ["issue.resolved_date"]);
        assert_eq!(enc.gap_columns().len(), 4);
    }

    #[test]
    fn unmapped_labels_are_reported() {
        let (c, cands) = corpus(&["x"]);
        let issues = vec![Issue {
            raw_status: "Limbo".into(),
            raw_type: "Spike".into(),
            ..c.issues()[0].clone()
        }];
        let c = Corpus::new("P", issues, c.commits().to_vec()).unwrap();
        let enc = TabularEncoder::fit(&cands, &c, CategoryMap::default(), &TabularConfig::default()).unwrap();
        assert_eq!(enc.report().unmapped_statuses.get("Limbo"), Some(&1));
        assert_eq!(enc.report().unmapped_types.get("Spike"), Some(&1));
        let v = enc.featurize(&cands[0], &c).unwrap();
        let at = |name: &str| v.0[enc.feature_names().iter().position(|n| n == name).unwrap()];
        assert_eq!(at("issue.status=open"), 1.0);
        assert_eq!(at("issue.type=task"), 1.0);
    }

    #[test]
    fn redundancy_rates() {
        let (c, _) = corpus(&["x", "y"]);
        let r = drop_redundant_columns(&c, DEFAULT_REDUNDANCY_THRESHOLD);
        assert_eq!(r.reporter_creator_rate, 1.0);
        assert!(r.drop_reporter);

        let mut issues: Vec<Issue> = (0..100)
            .map(|k| issue(&format!("I{k}"), "2014-12-08T00:00:00Z"))
            .collect();
        issues[0].reporter = "someone-else".into();
        issues[1].reporter = "someone-else".into();
        let c = Corpus::new("P", issues, vec![]).unwrap();
        let r = drop_redundant_columns(&c, DEFAULT_REDUNDANCY_THRESHOLD);
        assert!((r.reporter_creator_rate - 0.98).abs() < 1e-12);
        assert!(!r.drop_reporter);
    }

    #[test]
    fn feature_names_avoid_denylist() {
        let (c, cands) = corpus(&["x", "y"]);
        let enc = TabularEncoder::fit(&cands, &c, CategoryMap::default(), &TabularConfig::default()).unwrap();
        for name in enc.feature_names() {
            assert!(!LEAKAGE_DENYLIST.iter().any(|d| name.contains(d)), "{name}");
        }
    }
}
