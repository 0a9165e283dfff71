// SPDX-License-Identifier: Apache-2.0

//! Seeded synthetic corpora with planted lexical and temporal link signal.
//!
//! Each issue draws its planted tokens from one of a fixed set of topics.
//! A linked commit repeats a share of those tokens (lexical strength) and
//! lands shortly before the issue's resolution (temporal strength).
//! Everything else is drawn from shared background vocabulary.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::corpus::{Commit, Corpus, Issue, Timestamp, SECONDS_PER_DAY};
use crate::error::{Error, Result};

/// Number of tokens planted in every issue summary.
pub const PLANTED_TOKENS: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SignalParams {
    /// Share of an issue's planted tokens repeated in its linked commits, in `[0, 1]`.
    pub lexical: f64,
    /// Probability that a linked commit lands within half a day of its issue, in `[0, 1]`.
    pub temporal: f64,
    /// Fraction of commits carrying a developer link, in `(0, 1]`.
    pub density: f64,
}

impl Default for SignalParams {
    fn default() -> Self {
        SignalParams {
            lexical: 1.0,
            temporal: 1.0,
            density: 1.0,
        }
    }
}

impl SignalParams {
    fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.lexical) {
            return Err(Error::param(format!("lexical strength {} not in [0,1]", self.lexical)));
        }
        if !(0.0..=1.0).contains(&self.temporal) {
            return Err(Error::param(format!(
                "temporal strength {} not in [0,1]",
                self.temporal
            )));
        }
        if !(self.density > 0.0 && self.density <= 1.0) {
            return Err(Error::param(format!("link density {} not in (0,1]", self.density)));
        }
        Ok(())
    }
}

const TOPICS: &[[&str; 6]] = &[
    ["calcite", "planner", "aggregate", "indicator", "logical", "rule"],
    [
        "checkpoint",
        "barrier",
        "snapshot",
        "coordinator",
        "savepoint",
        "restore",
    ],
    ["kafka", "consumer", "offset", "partition", "producer", "topic"],
    ["scheduler", "executor", "queue", "worker", "heartbeat", "slot"],
    ["parquet", "schema", "column", "encoding", "dictionary", "footer"],
    ["window", "watermark", "trigger", "timer", "lateness", "session"],
    ["serializer", "kryo", "pojo", "registration", "buffer", "stream"],
    ["metrics", "gauge", "counter", "histogram", "reporter", "latency"],
    ["yarn", "container", "resource", "allocation", "memory", "cluster"],
    ["sql", "parser", "dialect", "keyword", "literal", "token"],
    ["jdbc", "driver", "connection", "statement", "cursor", "transaction"],
    ["docs", "javadoc", "typo", "readme", "example", "tutorial"],
    ["gradle", "maven", "dependency", "shade", "plugin", "artifact"],
    ["security", "kerberos", "token", "ssl", "certificate", "keystore"],
    ["webui", "dashboard", "frontend", "angular", "route", "widget"],
    ["cache", "eviction", "ttl", "entry", "region", "affinity"],
    ["index", "btree", "lookup", "range", "scan", "cursor"],
    ["dag", "operator", "task", "retry", "backfill", "sensor"],
    ["arrow", "vector", "allocator", "ipc", "flight", "record"],
    ["groovy", "closure", "dsl", "ast", "transform", "compiler"],
];

const BACKGROUND: &[&str] = &[
    "fix", "add", "update", "remove", "support", "improve", "handle", "change", "refactor", "test", "value", "method",
    "class", "case", "error", "failure", "build", "version", "config", "option", "when", "should", "properly",
    "missing", "wrong", "new", "use", "default", "null", "check", "make", "allow", "avoid", "issue", "code", "run",
    "set", "get", "call", "field",
];

const RAW_TYPES: &[&str] = &["Bug", "Improvement", "New Feature", "Task", "Sub-task", "Wish", "Test"];
const RESOLVED_STATUSES: &[&str] = &["Closed", "Resolved", "Done", "Fixed"];
const OPEN_STATUSES: &[&str] = &["Open", "In Progress", "Reopened", "Patch Available"];

const N_PEOPLE: usize = 30;
const EPOCH_START: i64 = 1_514_764_800; // 2018-01-01T00:00:00Z
const HOUR: i64 = 3_600;

struct Planted {
    topic: usize,
    tokens: Vec<&'static str>,
}

fn pick<'a, R: Rng>(rng: &mut R, items: &'a [&'a str]) -> &'a str {
    items[rng.gen_range(0..items.len())]
}

fn camel(words: &[&str]) -> String {
    words
        .iter()
        .map(|w| {
            let mut cs = w.chars();
            match cs.next() {
                Some(c) => c.to_ascii_uppercase().to_string() + cs.as_str(),
                None => String::new(),
            }
        })
        .collect()
}

fn code_line<R: Rng>(rng: &mut R, a: &str, b: &str) -> String {
    match rng.gen_range(0..4) {
        0 => format!("+    {} handle = {}.{}();", camel(&[a, b]), a, camel(&["get", b])),
        1 => format!("-    int {}_{} = 0;", a.to_uppercase(), b.to_uppercase()),
        2 => format!("+    {}::{}(value);", a, b),
        _ => format!("+    private {} {};", camel(&[a]), camel(&[b, "ref"]).to_lowercase()),
    }
}

fn diff_text<R: Rng>(rng: &mut R, words: &[&str]) -> String {
    let mut lines = vec![
        "diff --git a/src/Main.java b/src/Main.java".to_string(),
        "@@ -10,6 +10,8 @@".to_string(),
    ];
    for pair in words.chunks(2) {
        let a = pair[0];
        let b = pair.get(1).copied().unwrap_or(a);
        lines.push(code_line(rng, a, b));
    }
    let noise = pick(rng, BACKGROUND);
    lines.push(format!("     return {noise} ;"));
    lines.join("\n")
}

/// Generates a deterministic corpus for a seed; see the module docs for the
/// planting scheme.
pub fn synthesize_corpus(seed: u64, n_issues: usize, n_commits: usize, signal: SignalParams) -> Result<Corpus> {
    if n_issues == 0 || n_commits == 0 {
        return Err(Error::param("synthetic corpus needs at least one issue and one commit"));
    }
    signal.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let project = "SYN".to_string();

    let people: Vec<String> = (0..N_PEOPLE).map(|_| format!("{:016x}", rng.gen::<u64>())).collect();
    let span_days = (n_issues as f64 * 1.8).max(60.0);
    let span_secs = (span_days * SECONDS_PER_DAY as f64) as i64;

    let mut issues = Vec::with_capacity(n_issues);
    let mut planted = Vec::with_capacity(n_issues);
    for i in 0..n_issues {
        let topic = rng.gen_range(0..TOPICS.len());
        let mut words: Vec<&'static str> = TOPICS[topic].to_vec();
        words.shuffle(&mut rng);
        words.truncate(PLANTED_TOKENS);

        let mut summary: Vec<&str> = words.clone();
        summary.push(pick(&mut rng, BACKGROUND));
        summary.push(pick(&mut rng, BACKGROUND));
        summary.shuffle(&mut rng);

        let description = if rng.gen_bool(0.6) {
            let n = rng.gen_range(5..10);
            let mut d: Vec<&str> = (0..n).map(|_| pick(&mut rng, BACKGROUND)).collect();
            d.push(TOPICS[topic][rng.gen_range(0..6)]);
            d.join(" ")
        } else {
            String::new()
        };

        let created = EPOCH_START + rng.gen_range(0..span_secs);
        let (resolved, updated) = if rng.gen_bool(0.85) {
            let r = created + rng.gen_range(SECONDS_PER_DAY..30 * SECONDS_PER_DAY);
            (Some(r), r + rng.gen_range(0..3 * SECONDS_PER_DAY))
        } else {
            (None, created + rng.gen_range(0..20 * SECONDS_PER_DAY))
        };
        let status = if resolved.is_some() {
            pick(&mut rng, RESOLVED_STATUSES)
        } else {
            pick(&mut rng, OPEN_STATUSES)
        };
        let creator = people[rng.gen_range(0..N_PEOPLE)].clone();
        let reporter = if rng.gen_bool(0.995) {
            creator.clone()
        } else {
            people[rng.gen_range(0..N_PEOPLE)].clone()
        };

        issues.push(Issue {
            issue_id: format!("{project}-{}", i + 1),
            project: project.clone(),
            summary: summary.join(" "),
            description,
            raw_type: pick(&mut rng, RAW_TYPES).to_string(),
            raw_status: status.to_string(),
            created_date: Timestamp(created),
            updated_date: Timestamp(updated),
            resolved_date: resolved.map(Timestamp),
            reporter,
            creator,
        });
        planted.push(Planted { topic, tokens: words });
    }

    let n_linked = ((signal.density * n_commits as f64).round() as usize).clamp(1, n_commits);
    let mut commit_order: Vec<usize> = (0..n_commits).collect();
    commit_order.shuffle(&mut rng);
    let mut issue_order: Vec<usize> = (0..n_issues).collect();
    issue_order.shuffle(&mut rng);
    let mut link_of = vec![None; n_commits];
    for (j, &c) in commit_order.iter().take(n_linked).enumerate() {
        link_of[c] = Some(issue_order[j % n_issues]);
    }

    let shared = (signal.lexical * PLANTED_TOKENS as f64).round() as usize;
    let mut commits = Vec::with_capacity(n_commits);
    for (c, link) in link_of.iter().enumerate() {
        let other_topic = rng.gen_range(0..TOPICS.len());
        let mut noise: Vec<&'static str> = TOPICS[other_topic].to_vec();
        noise.shuffle(&mut rng);

        let (message_words, code_words, commit_time) = match *link {
            Some(i) => {
                let plant = &planted[i];
                let mut words: Vec<&str> = plant.tokens[..shared].to_vec();
                words.extend(noise.iter().take(PLANTED_TOKENS - shared));
                let code_words: Vec<&str> = if rng.gen_bool(signal.lexical) {
                    let mut w = plant.tokens.clone();
                    w.push(TOPICS[plant.topic][rng.gen_range(0..6)]);
                    w
                } else {
                    noise[..4].to_vec()
                };
                let issue = &issues[i];
                let t = if rng.gen_bool(signal.temporal) {
                    match issue.resolved_date {
                        Some(r) => r.0 - rng.gen_range(0..12 * HOUR),
                        None => issue.created_date.0 + rng.gen_range(0..12 * HOUR),
                    }
                } else {
                    issue.created_date.0 + rng.gen_range(-30 * SECONDS_PER_DAY..30 * SECONDS_PER_DAY)
                };
                (words, code_words, t)
            }
            None => {
                let words: Vec<&str> = noise[..PLANTED_TOKENS].to_vec();
                let code: Vec<&str> = noise[2..6].to_vec();
                (words, code, EPOCH_START + rng.gen_range(0..span_secs))
            }
        };

        let mut message = message_words;
        message.push(pick(&mut rng, BACKGROUND));
        message.push(pick(&mut rng, BACKGROUND));
        message.shuffle(&mut rng);

        let author_time = if rng.gen_bool(0.7) {
            commit_time
        } else {
            commit_time - rng.gen_range(0..2 * SECONDS_PER_DAY)
        };
        let author = people[rng.gen_range(0..N_PEOPLE)].clone();
        let committer = if rng.gen_bool(0.65) {
            author.clone()
        } else {
            people[rng.gen_range(0..N_PEOPLE)].clone()
        };

        let linked_issue_ids: BTreeSet<String> = link.iter().map(|&i| issues[i].issue_id.clone()).collect();
        commits.push(Commit {
            commit_hash: format!("{:040x}", (rng.gen::<u128>() >> 8) ^ c as u128),
            project: project.clone(),
            message: message.join(" "),
            diff_text: diff_text(&mut rng, &code_words),
            author,
            committer,
            author_time_date: Timestamp(author_time),
            commit_time_date: Timestamp(commit_time),
            linked_issue_ids,
        });
    }

    Corpus::new(project, issues, commits)
}
