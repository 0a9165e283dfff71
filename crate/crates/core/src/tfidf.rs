// SPDX-License-Identifier: Apache-2.0

//! N-gram TF-IDF vectorizers and the three-block textual feature vector.
//!
//! Weighting: raw term count times smoothed idf,
//! `idf(t) = ln((1 + N) / (1 + df(t))) + 1`, then L2 normalization of
//! each block.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::corpus::RecordSource;
use crate::error::{Error, Result};
use crate::features::SparseVector;
use crate::linkgen::LinkCandidate;
use crate::textprep::{self, StopWords, TextPreprocessor, TokenStream};

pub const DEFAULT_MAX_FEATURES: usize = 10_000;
pub const DEFAULT_NGRAM_RANGE: (usize, usize) = (1, 3);

/// Every contiguous n-gram of `tokens` for n in `range`, space-joined.
pub fn ngrams(tokens: &[String], range: (usize, usize)) -> Vec<String> {
    let mut out = Vec::new();
    for n in range.0..=range.1 {
        if n == 0 || n > tokens.len() {
            continue;
        }
        out.extend(tokens.windows(n).map(|w| w.join(" ")));
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TfidfModel {
    term_index: BTreeMap<String, u32>,
    idf: Vec<f64>,
    ngram_range: (usize, usize),
    max_features: usize,
}

impl TfidfModel {
    pub fn fit(documents: &[TokenStream]) -> Result<Self> {
        Self::fit_with(documents, DEFAULT_NGRAM_RANGE, DEFAULT_MAX_FEATURES)
    }

    /// Fits the vocabulary and idf weights.
    ///
    /// When the vocabulary exceeds `max_features`, the n-grams with the
    /// highest total occurrence count survive (ties broken lexicographically).
    /// Surviving terms are indexed in lexicographic order.
    pub fn fit_with(documents: &[TokenStream], ngram_range: (usize, usize), max_features: usize) -> Result<Self> {
        if documents.is_empty() {
            return Err(Error::param("cannot fit a vectorizer on zero documents"));
        }
        if ngram_range.0 == 0 || ngram_range.0 > ngram_range.1 {
            return Err(Error::param(format!("bad n-gram range {ngram_range:?}")));
        }
        let mut occurrences: HashMap<String, (u64, u64)> = HashMap::new();
        for doc in documents {
            let mut grams = ngrams(&doc.tokens, ngram_range);
            for g in &grams {
                occurrences.entry(g.clone()).or_default().0 += 1;
            }
            grams.sort_unstable();
            grams.dedup();
            for g in grams {
                occurrences.get_mut(&g).expect("counted above").1 += 1;
            }
        }
        let mut ranked: Vec<(String, (u64, u64))> = occurrences.into_iter().collect();
        if ranked.len() > max_features {
            ranked.sort_by(|a, b| b.1 .0.cmp(&a.1 .0).then_with(|| a.0.cmp(&b.0)));
            ranked.truncate(max_features);
        }
        ranked.sort_by(|a, b| a.0.cmp(&b.0));

        let n = documents.len() as f64;
        let idf = ranked
            .iter()
            .map(|(_, (_, df))| ((1.0 + n) / (1.0 + *df as f64)).ln() + 1.0)
            .collect();
        let term_index = ranked
            .into_iter()
            .enumerate()
            .map(|(i, (term, _))| (term, i as u32))
            .collect();
        Ok(TfidfModel {
            term_index,
            idf,
            ngram_range,
            max_features,
        })
    }

    pub fn width(&self) -> usize {
        self.idf.len()
    }

    pub fn index_of(&self, term: &str) -> Option<usize> {
        self.term_index.get(term).map(|&i| i as usize)
    }

    pub fn idf(&self, term: &str) -> Option<f64> {
        self.index_of(term).map(|i| self.idf[i])
    }

    pub fn idf_weights(&self) -> &[f64] {
        &self.idf
    }

    pub fn terms(&self) -> impl Iterator<Item = (&str, usize)> {
        self.term_index.iter().map(|(t, &i)| (t.as_str(), i as usize))
    }

    pub fn ngram_range(&self) -> (usize, usize) {
        self.ngram_range
    }

    pub fn max_features(&self) -> usize {
        self.max_features
    }

    /// Count times idf over in-vocabulary n-grams, L2-normalized.
    pub fn transform(&self, document: &TokenStream) -> SparseVector {
        let mut counts: BTreeMap<u32, u64> = BTreeMap::new();
        for g in ngrams(&document.tokens, self.ngram_range) {
            if let Some(&i) = self.term_index.get(&g) {
                *counts.entry(i).or_default() += 1;
            }
        }
        let pairs = counts
            .into_iter()
            .map(|(i, c)| (i, c as f64 * self.idf[i as usize]))
            .collect();
        SparseVector::from_pairs(self.width(), pairs)
            .expect("indices come from the vocabulary")
            .normalized()
    }
}

/// The three fitted vectorizers of the textual channel plus the
/// preprocessing settings they were fitted with.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TextualVectorizer {
    stopwords: Vec<String>,
    pub issue: TfidfModel,
    pub message: TfidfModel,
    pub code: TfidfModel,
}

#[derive(Debug, Clone)]
struct Documents {
    issue: TokenStream,
    message: TokenStream,
    code: TokenStream,
}

impl TextualVectorizer {
    /// Fits one vectorizer per channel over the distinct issues and commits
    /// referenced by `candidates`, visited in sorted key order.
    pub fn fit(
        candidates: &[LinkCandidate],
        source: &dyn RecordSource,
        stopwords: &StopWords,
        max_features: usize,
    ) -> Result<Self> {
        let pre = TextPreprocessor::new(stopwords.clone());
        let mut issue_ids: Vec<&str> = candidates.iter().map(|c| c.issue_id.as_str()).collect();
        issue_ids.sort_unstable();
        issue_ids.dedup();
        let mut hashes: Vec<&str> = candidates.iter().map(|c| c.commit_hash.as_str()).collect();
        hashes.sort_unstable();
        hashes.dedup();

        let issue_docs = issue_ids
            .iter()
            .map(|id| Ok(pre.natural(&textprep::issue_text(source.issue(id)?))))
            .collect::<Result<Vec<_>>>()?;
        let mut message_docs = Vec::with_capacity(hashes.len());
        let mut code_docs = Vec::with_capacity(hashes.len());
        for hash in &hashes {
            let commit = source.commit(hash)?;
            message_docs.push(pre.natural(&commit.message));
            code_docs.push(textprep::extract_code_terms(&commit.diff_text));
        }
        Ok(TextualVectorizer {
            stopwords: stopwords.words(),
            issue: TfidfModel::fit_with(&issue_docs, DEFAULT_NGRAM_RANGE, max_features)?,
            message: TfidfModel::fit_with(&message_docs, DEFAULT_NGRAM_RANGE, max_features)?,
            code: TfidfModel::fit_with(&code_docs, DEFAULT_NGRAM_RANGE, max_features)?,
        })
    }

    pub fn width(&self) -> usize {
        self.issue.width() + self.message.width() + self.code.width()
    }

    /// Column offsets of the message and code blocks.
    pub fn block_offsets(&self) -> (usize, usize) {
        (self.issue.width(), self.issue.width() + self.message.width())
    }

    pub fn preprocessor(&self) -> TextPreprocessor {
        TextPreprocessor::new(StopWords::from_words(self.stopwords.iter().cloned()))
    }

    fn documents(
        &self,
        pre: &TextPreprocessor,
        candidate: &LinkCandidate,
        source: &dyn RecordSource,
    ) -> Result<Documents> {
        let issue = source.issue(&candidate.issue_id)?;
        let commit = source.commit(&candidate.commit_hash)?;
        Ok(Documents {
            issue: pre.natural(&textprep::issue_text(issue)),
            message: pre.natural(&commit.message),
            code: textprep::extract_code_terms(&commit.diff_text),
        })
    }

    /// Issue block, message block and code-term block, concatenated.
    pub fn featurize(&self, candidate: &LinkCandidate, source: &dyn RecordSource) -> Result<SparseVector> {
        let docs = self.documents(&self.preprocessor(), candidate, source)?;
        Ok(SparseVector::concat(&[
            &self.issue.transform(&docs.issue),
            &self.message.transform(&docs.message),
            &self.code.transform(&docs.code),
        ]))
    }

    /// [`featurize`](Self::featurize) over many candidates, transforming each
    /// distinct issue and commit once.
    pub fn featurize_all(&self, candidates: &[LinkCandidate], source: &dyn RecordSource) -> Result<Vec<SparseVector>> {
        let pre = self.preprocessor();
        let mut issue_blocks: HashMap<&str, SparseVector> = HashMap::new();
        let mut commit_blocks: HashMap<&str, (SparseVector, SparseVector)> = HashMap::new();
        let mut out = Vec::with_capacity(candidates.len());
        for c in candidates {
            if !issue_blocks.contains_key(c.issue_id.as_str()) {
                let doc = pre.natural(&textprep::issue_text(source.issue(&c.issue_id)?));
                issue_blocks.insert(&c.issue_id, self.issue.transform(&doc));
            }
            if !commit_blocks.contains_key(c.commit_hash.as_str()) {
                let commit = source.commit(&c.commit_hash)?;
                let message = self.message.transform(&pre.natural(&commit.message));
                let code = self.code.transform(&textprep::extract_code_terms(&commit.diff_text));
                commit_blocks.insert(&c.commit_hash, (message, code));
            }
            let (message, code) = &commit_blocks[c.commit_hash.as_str()];
            out.push(SparseVector::concat(&[
                &issue_blocks[c.issue_id.as_str()],
                message,
                code,
            ]));
        }
        Ok(out)
    }
}
