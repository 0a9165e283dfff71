// SPDX-License-Identifier: Apache-2.0

//! Pipeline configuration. One JSON document covers every stage; missing
//! fields take the defaults below.

use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::learn::{EnsembleKind, LearnerParams};
use crate::linkgen::{Window, DEFAULT_WINDOW_DAYS};
use crate::tabular::{
    CategoryMap, TabularConfig, DEFAULT_IDENTITY_TOP_K, DEFAULT_MISSING_THRESHOLD, DEFAULT_REDUNDANCY_THRESHOLD,
};
use crate::textprep::StopWords;
use crate::tfidf::DEFAULT_MAX_FEATURES;

pub const DEFAULT_SEED: u64 = 42;
pub const DEFAULT_FOLDS: usize = 5;
pub const DEFAULT_THRESHOLD: f64 = 0.5;
pub const DEFAULT_ALPHA_STEPS: u32 = 20;
pub const DEFAULT_VALIDATION_FRACTION: f64 = 0.2;
/// Environment variable holding the default for every seed.
pub const SEED_ENV: &str = "HYBRID_LINKER_SEED";

/// Where the fusion weight is tuned during cross-validation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TuneOn {
    /// Inner split of each training fold.
    #[default]
    Validation,
    /// The test fold itself (optimistic; for comparison only).
    Test,
}

impl FromStr for TuneOn {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "validation" => Ok(TuneOn::Validation),
            "test" => Ok(TuneOn::Test),
            other => Err(Error::param(format!(
                "tune_on must be `validation` or `test`, got `{other}`"
            ))),
        }
    }
}

impl TuneOn {
    pub fn as_str(self) -> &'static str {
        match self {
            TuneOn::Validation => "validation",
            TuneOn::Test => "test",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    pub textual: LearnerParams,
    pub ensemble: EnsembleKind,
    /// Member parameters in the ensemble's canonical order; empty means defaults.
    pub members: Vec<LearnerParams>,
    /// False-link window in days; `None` disables the window.
    pub window_days: Option<u32>,
    pub balance_seed: u64,
    pub fold_seed: u64,
    /// Seeds the fit/validation split inside training.
    pub split_seed: u64,
    pub folds: usize,
    pub stratified: bool,
    pub tune_on: TuneOn,
    /// The fusion grid is `i / alpha_steps` for `i` in `0..=alpha_steps`.
    pub alpha_steps: u32,
    pub validation_fraction: f64,
    pub threshold: f64,
    pub max_features: usize,
    pub gap_features: bool,
    pub identity_top_k: usize,
    pub missing_threshold: f64,
    pub redundancy_threshold: f64,
    pub category_map: Option<PathBuf>,
    pub stopwords: Option<PathBuf>,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            textual: LearnerParams::textual_gradient_boosting().with_seed(DEFAULT_SEED),
            ensemble: EnsembleKind::default(),
            members: Vec::new(),
            window_days: Some(DEFAULT_WINDOW_DAYS),
            balance_seed: DEFAULT_SEED,
            fold_seed: DEFAULT_SEED,
            split_seed: DEFAULT_SEED,
            folds: DEFAULT_FOLDS,
            stratified: false,
            tune_on: TuneOn::Validation,
            alpha_steps: DEFAULT_ALPHA_STEPS,
            validation_fraction: DEFAULT_VALIDATION_FRACTION,
            threshold: DEFAULT_THRESHOLD,
            max_features: DEFAULT_MAX_FEATURES,
            gap_features: true,
            identity_top_k: DEFAULT_IDENTITY_TOP_K,
            missing_threshold: DEFAULT_MISSING_THRESHOLD,
            redundancy_threshold: DEFAULT_REDUNDANCY_THRESHOLD,
            category_map: None,
            stopwords: None,
        }
    }
}

/// Every seed in a configuration, as echoed in reports.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Seeds {
    pub balance: u64,
    pub fold: u64,
    pub split: u64,
    pub textual: u64,
    pub members: Vec<u64>,
}

/// Loaded lookup tables referenced by a configuration.
#[derive(Debug, Clone)]
pub struct Resources {
    pub categories: CategoryMap,
    pub stopwords: StopWords,
}

impl Config {
    /// Defaults with every seed set to `seed`.
    pub fn seeded(seed: u64) -> Self {
        Config::default().with_seed(seed)
    }

    /// Sets every seed to `seed`; ensemble member `i` gets `seed + i`.
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.balance_seed = seed;
        self.fold_seed = seed;
        self.split_seed = seed;
        self.textual.seed = seed;
        for (i, m) in self.members.iter_mut().enumerate() {
            m.seed = seed.wrapping_add(i as u64);
        }
        self
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let config: Config = serde_json::from_str(text).map_err(|e| Error::param(format!("config: {e}")))?;
        config.validate()?;
        Ok(config)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Config::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn window(&self) -> Window {
        match self.window_days {
            Some(d) => Window::Days(d),
            None => Window::Unbounded,
        }
    }

    /// Member parameters, filling defaults when none are configured. The
    /// textual seed is the base for default member seeds.
    pub fn member_params(&self) -> Vec<LearnerParams> {
        if self.members.is_empty() {
            self.ensemble.default_params(self.textual.seed)
        } else {
            self.members.clone()
        }
    }

    pub fn seeds(&self) -> Seeds {
        Seeds {
            balance: self.balance_seed,
            fold: self.fold_seed,
            split: self.split_seed,
            textual: self.textual.seed,
            members: self.member_params().iter().map(|p| p.seed).collect(),
        }
    }

    pub fn tabular(&self) -> TabularConfig {
        TabularConfig {
            gap_features: self.gap_features,
            identity_top_k: self.identity_top_k,
            missing_threshold: self.missing_threshold,
            redundancy_threshold: self.redundancy_threshold,
        }
    }

    /// The fusion grid in increasing order.
    pub fn alpha_grid(&self) -> Vec<f64> {
        (0..=self.alpha_steps)
            .map(|i| f64::from(i) / f64::from(self.alpha_steps))
            .collect()
    }

    pub fn validate(&self) -> Result<()> {
        self.textual.validate()?;
        let members = self.member_params();
        if members.len() != self.ensemble.variants().len()
            || members
                .iter()
                .zip(self.ensemble.variants())
                .any(|(p, &v)| p.variant != v)
        {
            return Err(Error::param(format!(
                "members must be {:?} for ensemble {}",
                self.ensemble.variants().iter().map(|v| v.name()).collect::<Vec<_>>(),
                self.ensemble
            )));
        }
        for m in &members {
            m.validate()?;
        }
        if self.folds < 2 {
            return Err(Error::param("folds must be at least 2"));
        }
        if self.alpha_steps < 1 {
            return Err(Error::param("alpha_steps must be at least 1"));
        }
        if !(self.validation_fraction > 0.0 && self.validation_fraction < 1.0) {
            return Err(Error::param("validation_fraction must be in (0, 1)"));
        }
        if !(0.0..=1.0).contains(&self.threshold) {
            return Err(Error::param("threshold must be in [0, 1]"));
        }
        if self.max_features < 1 {
            return Err(Error::param("max_features must be at least 1"));
        }
        if !(0.0..=1.0).contains(&self.missing_threshold) || !(0.0..=1.0).contains(&self.redundancy_threshold) {
            return Err(Error::param("column thresholds must be in [0, 1]"));
        }
        Ok(())
    }

    pub fn load_resources(&self) -> Result<Resources> {
        let categories = match &self.category_map {
            Some(p) => CategoryMap::from_file(p)?,
            None => CategoryMap::default(),
        };
        let stopwords = match &self.stopwords {
            Some(p) => StopWords::from_file(p)?,
            None => StopWords::default(),
        };
        Ok(Resources { categories, stopwords })
    }
}
