// SPDX-License-Identifier: Apache-2.0

//! Natural-language cleanup and code-term extraction.

pub mod porter;

use std::collections::HashSet;
use std::path::Path;
use std::sync::OnceLock;

use regex::Regex;
use serde::{Deserialize, Serialize};

use crate::corpus::Issue;
use crate::error::{Error, Result};

/// English stopword list shipped with the crate (one lowercase word per line).
pub const DEFAULT_STOPWORDS: &str = include_str!("../../data/stopwords.txt");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TokenKind {
    Natural,
    CodeTerm,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TokenStream {
    pub tokens: Vec<String>,
    pub kind: TokenKind,
}

impl TokenStream {
    pub fn natural(tokens: Vec<String>) -> Self {
        TokenStream {
            tokens,
            kind: TokenKind::Natural,
        }
    }

    pub fn code_terms(tokens: Vec<String>) -> Self {
        TokenStream {
            tokens,
            kind: TokenKind::CodeTerm,
        }
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StopWords(HashSet<String>);

impl StopWords {
    pub fn parse(text: &str) -> Self {
        StopWords(
            text.lines()
                .map(|l| l.trim().to_lowercase())
                .filter(|l| !l.is_empty())
                .collect(),
        )
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Ok(Self::parse(&text))
    }

    pub fn contains(&self, word: &str) -> bool {
        self.0.contains(word)
    }

    /// The words in sorted order.
    pub fn words(&self) -> Vec<String> {
        let mut w: Vec<String> = self.0.iter().cloned().collect();
        w.sort();
        w
    }

    pub fn from_words<I: IntoIterator<Item = String>>(words: I) -> Self {
        StopWords(words.into_iter().collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl Default for StopWords {
    fn default() -> Self {
        Self::parse(DEFAULT_STOPWORDS)
    }
}

/// Tokenizer + stopword filter + stemmer for natural text.
#[derive(Debug, Clone)]
pub struct TextPreprocessor {
    stopwords: StopWords,
    stem: bool,
}

impl Default for TextPreprocessor {
    fn default() -> Self {
        TextPreprocessor {
            stopwords: StopWords::default(),
            stem: true,
        }
    }
}

impl TextPreprocessor {
    pub fn new(stopwords: StopWords) -> Self {
        TextPreprocessor { stopwords, stem: true }
    }

    pub fn without_stemming(mut self) -> Self {
        self.stem = false;
        self
    }

    fn keep(&self, token: &str) -> bool {
        token.len() >= 2 && !self.stopwords.contains(token)
    }

    /// Lowercases, splits on every non-alphanumeric character, drops short
    /// tokens and stopwords, then stems. The filter runs again after stemming
    /// so that no stem is a stopword or shorter than two characters.
    pub fn natural(&self, text: &str) -> TokenStream {
        let lowered = text.to_lowercase();
        let tokens = lowered
            .split(|c: char| !(c.is_ascii_lowercase() || c.is_ascii_digit()))
            .filter(|t| self.keep(t))
            .map(|t| if self.stem { porter::stem(t) } else { t.to_string() })
            .filter(|t| self.keep(t))
            .collect();
        TokenStream::natural(tokens)
    }
}

/// [`TextPreprocessor::natural`] with the shipped stopword list.
pub fn preprocess_natural(text: &str) -> TokenStream {
    static DEFAULT: OnceLock<TextPreprocessor> = OnceLock::new();
    DEFAULT.get_or_init(TextPreprocessor::default).natural(text)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CodeTermPattern {
    CNotation,
    QualifiedName,
    CamelCase,
    UpperCase,
    SystemVariable,
    ReferenceExpression,
}

impl CodeTermPattern {
    pub const ALL: [CodeTermPattern; 6] = [
        CodeTermPattern::CNotation,
        CodeTermPattern::QualifiedName,
        CodeTermPattern::CamelCase,
        CodeTermPattern::UpperCase,
        CodeTermPattern::SystemVariable,
        CodeTermPattern::ReferenceExpression,
    ];

    pub fn source(self) -> &'static str {
        match self {
            CodeTermPattern::CNotation => r"[A-Za-z]+[0-9]*_.*",
            CodeTermPattern::QualifiedName => r"[A-Za-z]+[0-9]*[.].+",
            CodeTermPattern::CamelCase => r"[A-Za-z]+.*[A-Z]+.*",
            CodeTermPattern::UpperCase => r"[A-Z0-9]+",
            CodeTermPattern::SystemVariable => r"_+[A-Za-z0-9]+.+",
            CodeTermPattern::ReferenceExpression => r"[a-zA-Z]+[:]{2,}.+",
        }
    }

    fn regex(self) -> &'static Regex {
        static COMPILED: OnceLock<Vec<Regex>> = OnceLock::new();
        let all = COMPILED.get_or_init(|| {
            CodeTermPattern::ALL
                .iter()
                .map(|p| Regex::new(&format!("^(?:{})$", p.source())).expect("static pattern"))
                .collect()
        });
        &all[self as usize]
    }

    /// Full-match test of one token.
    pub fn matches(self, token: &str) -> bool {
        self.regex().is_match(token)
    }
}

pub fn is_code_term(token: &str) -> bool {
    CodeTermPattern::ALL.iter().any(|p| p.matches(token))
}

/// Whitespace tokens of `diff_text` that fully match at least one code-term
/// pattern, verbatim and in order (duplicates kept).
pub fn extract_code_terms(diff_text: &str) -> TokenStream {
    TokenStream::code_terms(
        diff_text
            .split_whitespace()
            .filter(|t| is_code_term(t))
            .map(str::to_string)
            .collect(),
    )
}

/// Issue summary and description joined by a single space.
pub fn issue_text(issue: &Issue) -> String {
    match (issue.summary.is_empty(), issue.description.is_empty()) {
        (_, true) => issue.summary.clone(),
        (true, false) => issue.description.clone(),
        (false, false) => format!("{} {}", issue.summary, issue.description),
    }
}
