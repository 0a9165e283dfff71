// SPDX-License-Identifier: Apache-2.0

//! Raw issue and commit records, line-record I/O and validation.
//!
//! Both input files hold one JSON object per line. Dates are ISO-8601
//! strings with a zone designator and are normalized to UTC epoch seconds
//! on ingestion. Blank lines are skipped.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::sync::Mutex;

use chrono::{DateTime, SecondsFormat, Utc};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const ISSUES_FILE: &str = "issues.jsonl";
pub const COMMITS_FILE: &str = "commits.jsonl";

pub const SECONDS_PER_DAY: i64 = 86_400;

/// UTC instant in whole seconds since the Unix epoch.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Timestamp(pub i64);

impl Timestamp {
    pub fn parse_iso8601(s: &str) -> std::result::Result<Self, String> {
        DateTime::parse_from_rfc3339(s.trim())
            .map(|dt| Timestamp(dt.with_timezone(&Utc).timestamp()))
            .map_err(|e| format!("bad timestamp `{s}`: {e}"))
    }

    pub fn to_iso8601(self) -> String {
        match DateTime::<Utc>::from_timestamp(self.0, 0) {
            Some(dt) => dt.to_rfc3339_opts(SecondsFormat::Secs, true),
            None => self.0.to_string(),
        }
    }

    /// Epoch days as a real number.
    pub fn epoch_days(self) -> f64 {
        self.0 as f64 / SECONDS_PER_DAY as f64
    }

    pub fn abs_diff_secs(self, other: Timestamp) -> u64 {
        self.0.abs_diff(other.0)
    }
}

impl fmt::Display for Timestamp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_iso8601())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Issue {
    pub issue_id: String,
    pub project: String,
    pub summary: String,
    pub description: String,
    pub raw_type: String,
    pub raw_status: String,
    pub created_date: Timestamp,
    pub updated_date: Timestamp,
    pub resolved_date: Option<Timestamp>,
    pub reporter: String,
    pub creator: String,
}

impl Issue {
    /// The issue dates the temporal window is measured against.
    pub fn dates(&self) -> impl Iterator<Item = Timestamp> + '_ {
        [Some(self.created_date), Some(self.updated_date), self.resolved_date]
            .into_iter()
            .flatten()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Commit {
    pub commit_hash: String,
    pub project: String,
    pub message: String,
    pub diff_text: String,
    pub author: String,
    pub committer: String,
    pub author_time_date: Timestamp,
    pub commit_time_date: Timestamp,
    pub linked_issue_ids: BTreeSet<String>,
}

impl Commit {
    pub fn dates(&self) -> [Timestamp; 2] {
        [self.author_time_date, self.commit_time_date]
    }
}

/// Validated, immutable collection of one project's issues and commits.
#[derive(Debug, Clone)]
pub struct Corpus {
    project: String,
    issues: Vec<Issue>,
    commits: Vec<Commit>,
    issue_index: HashMap<String, usize>,
    commit_index: HashMap<String, usize>,
}

impl PartialEq for Corpus {
    fn eq(&self, other: &Self) -> bool {
        self.project == other.project && self.issues == other.issues && self.commits == other.commits
    }
}

impl Corpus {
    /// Builds a corpus, rejecting records that break a record invariant.
    pub fn new(project: impl Into<String>, issues: Vec<Issue>, commits: Vec<Commit>) -> Result<Self> {
        let project = project.into();
        let mut issue_index = HashMap::with_capacity(issues.len());
        for (i, issue) in issues.iter().enumerate() {
            validate_issue(issue)?;
            if issue_index.insert(issue.issue_id.clone(), i).is_some() {
                return Err(Error::DuplicateKey {
                    kind: "issue",
                    key: issue.issue_id.clone(),
                });
            }
        }
        let mut commit_index = HashMap::with_capacity(commits.len());
        let mut dangling = BTreeSet::new();
        for (i, commit) in commits.iter().enumerate() {
            if commit.commit_hash.is_empty() {
                return Err(Error::InvalidRecord {
                    kind: "commit",
                    id: format!("#{i}"),
                    reason: "empty commit_hash".into(),
                });
            }
            if commit_index.insert(commit.commit_hash.clone(), i).is_some() {
                return Err(Error::DuplicateKey {
                    kind: "commit",
                    key: commit.commit_hash.clone(),
                });
            }
            for id in &commit.linked_issue_ids {
                if !issue_index.contains_key(id) {
                    dangling.insert(id.clone());
                }
            }
        }
        if !dangling.is_empty() {
            return Err(Error::DanglingReferences(dangling.into_iter().collect()));
        }
        Ok(Corpus {
            project,
            issues,
            commits,
            issue_index,
            commit_index,
        })
    }

    pub fn project(&self) -> &str {
        &self.project
    }

    pub fn issues(&self) -> &[Issue] {
        &self.issues
    }

    pub fn commits(&self) -> &[Commit] {
        &self.commits
    }

    pub fn get_issue(&self, id: &str) -> Option<&Issue> {
        self.issue_index.get(id).map(|&i| &self.issues[i])
    }

    pub fn get_commit(&self, hash: &str) -> Option<&Commit> {
        self.commit_index.get(hash).map(|&i| &self.commits[i])
    }

    pub fn n_links(&self) -> usize {
        self.commits.iter().map(|c| c.linked_issue_ids.len()).sum()
    }
}

fn validate_issue(issue: &Issue) -> Result<()> {
    let fail = |reason: String| Error::InvalidRecord {
        kind: "issue",
        id: issue.issue_id.clone(),
        reason,
    };
    if issue.issue_id.is_empty() {
        return Err(fail("empty issue_id".into()));
    }
    if issue.created_date > issue.updated_date {
        return Err(fail(format!(
            "created_date {} is after updated_date {}",
            issue.created_date, issue.updated_date
        )));
    }
    if let Some(resolved) = issue.resolved_date {
        if resolved < issue.created_date {
            return Err(fail(format!(
                "resolved_date {resolved} is before created_date {}",
                issue.created_date
            )));
        }
    }
    Ok(())
}

/// Read access to issue and commit records by key.
///
/// Training code reads records only through this trait so that record
/// access can be audited (see [`AuditedSource`]).
pub trait RecordSource: Sync {
    fn issue(&self, id: &str) -> Result<&Issue>;
    fn commit(&self, hash: &str) -> Result<&Commit>;
}

impl RecordSource for Corpus {
    fn issue(&self, id: &str) -> Result<&Issue> {
        self.get_issue(id).ok_or_else(|| Error::UnknownIssue(id.to_string()))
    }

    fn commit(&self, hash: &str) -> Result<&Commit> {
        self.get_commit(hash)
            .ok_or_else(|| Error::UnknownCommit(hash.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RecordKey {
    Issue(String),
    Commit(String),
}

/// Wraps a record source and logs every key read through it.
pub struct AuditedSource<'a, S: RecordSource + ?Sized> {
    inner: &'a S,
    log: Mutex<BTreeSet<RecordKey>>,
}

impl<'a, S: RecordSource + ?Sized> AuditedSource<'a, S> {
    pub fn new(inner: &'a S) -> Self {
        AuditedSource {
            inner,
            log: Mutex::new(BTreeSet::new()),
        }
    }

    pub fn accessed(&self) -> BTreeSet<RecordKey> {
        self.log.lock().expect("access log poisoned").clone()
    }

    pub fn clear(&self) {
        self.log.lock().expect("access log poisoned").clear();
    }
}

impl<S: RecordSource + ?Sized> RecordSource for AuditedSource<'_, S> {
    fn issue(&self, id: &str) -> Result<&Issue> {
        self.log
            .lock()
            .expect("access log poisoned")
            .insert(RecordKey::Issue(id.to_string()));
        self.inner.issue(id)
    }

    fn commit(&self, hash: &str) -> Result<&Commit> {
        self.log
            .lock()
            .expect("access log poisoned")
            .insert(RecordKey::Commit(hash.to_string()));
        self.inner.commit(hash)
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct IssueRecord {
    issue_id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    project: Option<String>,
    #[serde(default)]
    summary: String,
    #[serde(default)]
    description: Option<String>,
    #[serde(default)]
    raw_type: String,
    #[serde(default)]
    raw_status: String,
    created_date: String,
    updated_date: String,
    #[serde(default)]
    resolved_date: Option<String>,
    #[serde(default)]
    reporter: String,
    #[serde(default)]
    creator: String,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CommitRecord {
    commit_hash: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    project: Option<String>,
    #[serde(default)]
    message: String,
    #[serde(default)]
    diff_text: String,
    #[serde(default)]
    author: String,
    #[serde(default)]
    committer: String,
    author_time_date: String,
    commit_time_date: String,
    #[serde(default)]
    linked_issue_ids: Vec<String>,
}

impl IssueRecord {
    fn into_issue(self, default_project: &str) -> std::result::Result<Issue, String> {
        Ok(Issue {
            created_date: Timestamp::parse_iso8601(&self.created_date)?,
            updated_date: Timestamp::parse_iso8601(&self.updated_date)?,
            resolved_date: match self.resolved_date.as_deref() {
                None | Some("") => None,
                Some(s) => Some(Timestamp::parse_iso8601(s)?),
            },
            issue_id: self.issue_id,
            project: self.project.unwrap_or_else(|| default_project.to_string()),
            summary: self.summary,
            description: self.description.unwrap_or_default(),
            raw_type: self.raw_type,
            raw_status: self.raw_status,
            reporter: self.reporter,
            creator: self.creator,
        })
    }

    fn from_issue(issue: &Issue) -> Self {
        IssueRecord {
            issue_id: issue.issue_id.clone(),
            project: Some(issue.project.clone()),
            summary: issue.summary.clone(),
            description: Some(issue.description.clone()),
            raw_type: issue.raw_type.clone(),
            raw_status: issue.raw_status.clone(),
            created_date: issue.created_date.to_iso8601(),
            updated_date: issue.updated_date.to_iso8601(),
            resolved_date: issue.resolved_date.map(Timestamp::to_iso8601),
            reporter: issue.reporter.clone(),
            creator: issue.creator.clone(),
        }
    }
}

impl CommitRecord {
    fn into_commit(self, default_project: &str) -> std::result::Result<Commit, String> {
        Ok(Commit {
            author_time_date: Timestamp::parse_iso8601(&self.author_time_date)?,
            commit_time_date: Timestamp::parse_iso8601(&self.commit_time_date)?,
            commit_hash: self.commit_hash,
            project: self.project.unwrap_or_else(|| default_project.to_string()),
            message: self.message,
            diff_text: self.diff_text,
            author: self.author,
            committer: self.committer,
            linked_issue_ids: self.linked_issue_ids.into_iter().collect(),
        })
    }

    fn from_commit(commit: &Commit) -> Self {
        CommitRecord {
            commit_hash: commit.commit_hash.clone(),
            project: Some(commit.project.clone()),
            message: commit.message.clone(),
            diff_text: commit.diff_text.clone(),
            author: commit.author.clone(),
            committer: commit.committer.clone(),
            author_time_date: commit.author_time_date.to_iso8601(),
            commit_time_date: commit.commit_time_date.to_iso8601(),
            linked_issue_ids: commit.linked_issue_ids.iter().cloned().collect(),
        }
    }
}

fn read_records<R, T>(
    path: &Path,
    default_project: &str,
    convert: impl Fn(R, &str) -> std::result::Result<T, String>,
) -> Result<Vec<T>>
where
    R: for<'de> Deserialize<'de>,
{
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut out = Vec::new();
    for (n, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|e| Error::io(path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        let parse_err = |message: String| Error::Parse {
            path: path.to_path_buf(),
            line: n + 1,
            message,
        };
        let record: R = serde_json::from_str(&line).map_err(|e| parse_err(e.to_string()))?;
        out.push(convert(record, default_project).map_err(parse_err)?);
    }
    Ok(out)
}

/// Loads and validates a corpus from an issues file and a commits file.
///
/// Records without a `project` field are assigned to `project`; when
/// `project` is `None` the project is taken from the first record that
/// names one. Records naming a different project are rejected.
pub fn load_corpus(issues_path: &Path, commits_path: &Path, project: Option<&str>) -> Result<Corpus> {
    let default = project.unwrap_or("");
    let issues = read_records(issues_path, default, IssueRecord::into_issue)?;
    let commits = read_records(commits_path, default, CommitRecord::into_commit)?;

    let project = match project {
        Some(p) => p.to_string(),
        None => issues
            .iter()
            .map(|i| i.project.as_str())
            .chain(commits.iter().map(|c| c.project.as_str()))
            .find(|p| !p.is_empty())
            .unwrap_or_default()
            .to_string(),
    };
    let mut issues = issues;
    let mut commits = commits;
    for issue in &mut issues {
        if issue.project.is_empty() {
            issue.project = project.clone();
        } else if issue.project != project {
            return Err(Error::InvalidRecord {
                kind: "issue",
                id: issue.issue_id.clone(),
                reason: format!("project `{}` differs from `{project}`", issue.project),
            });
        }
    }
    for commit in &mut commits {
        if commit.project.is_empty() {
            commit.project = project.clone();
        } else if commit.project != project {
            return Err(Error::InvalidRecord {
                kind: "commit",
                id: commit.commit_hash.clone(),
                reason: format!("project `{}` differs from `{project}`", commit.project),
            });
        }
    }
    Corpus::new(project, issues, commits)
}

/// Loads `issues.jsonl` and `commits.jsonl` from a corpus directory.
pub fn load_corpus_dir(dir: &Path) -> Result<Corpus> {
    load_corpus(&dir.join(ISSUES_FILE), &dir.join(COMMITS_FILE), None)
}

fn write_lines<T: Serialize>(path: &Path, records: impl Iterator<Item = T>) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(file);
    for record in records {
        serde_json::to_writer(&mut w, &record).map_err(|e| Error::io(path, e.into()))?;
        w.write_all(b"\n").map_err(|e| Error::io(path, e))?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

pub fn write_issues(corpus: &Corpus, path: &Path) -> Result<()> {
    write_lines(path, corpus.issues().iter().map(IssueRecord::from_issue))
}

pub fn write_commits(corpus: &Corpus, path: &Path) -> Result<()> {
    write_lines(path, corpus.commits().iter().map(CommitRecord::from_commit))
}

/// Writes the corpus as `issues.jsonl` + `commits.jsonl` under `dir`,
/// creating the directory if needed. Returns the two paths.
pub fn write_corpus_dir(corpus: &Corpus, dir: &Path) -> Result<(PathBuf, PathBuf)> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let issues = dir.join(ISSUES_FILE);
    let commits = dir.join(COMMITS_FILE);
    write_issues(corpus, &issues)?;
    write_commits(corpus, &commits)?;
    Ok((issues, commits))
}

/// Ids of the issues referenced by at least one commit.
pub fn linked_issue_ids(corpus: &Corpus) -> HashSet<&str> {
    corpus
        .commits()
        .iter()
        .flat_map(|c| c.linked_issue_ids.iter().map(String::as_str))
        .collect()
}
