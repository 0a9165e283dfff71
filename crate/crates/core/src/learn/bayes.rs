// SPDX-License-Identifier: Apache-2.0

use serde::{Deserialize, Serialize};

use crate::features::SparseVector;

/// Added to every variance, as a fraction of the largest feature variance.
pub const VAR_SMOOTHING: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct ClassStats {
    log_prior: f64,
    mean: Vec<f64>,
    var: Vec<f64>,
    /// Log-likelihood of the all-zero row, so sparse rows only pay for non-zeros.
    zero_row_loglik: f64,
}

impl ClassStats {
    fn loglik(&self, x: &SparseVector) -> f64 {
        let mut total = self.log_prior + self.zero_row_loglik;
        for (j, v) in x.iter() {
            let (m, s) = (self.mean[j], self.var[j]);
            total += (m * m - (v - m) * (v - m)) / (2.0 * s);
        }
        total
    }
}

/// Gaussian naive Bayes with per-class, per-feature means and variances.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaussianNb {
    negative: ClassStats,
    positive: ClassStats,
}

impl GaussianNb {
    pub(super) fn fit(x: &[SparseVector], y: &[bool], width: usize) -> GaussianNb {
        let moments = |label: bool| {
            let rows: Vec<&SparseVector> = x.iter().zip(y).filter(|(_, &l)| l == label).map(|(r, _)| r).collect();
            let n = rows.len() as f64;
            let mut mean = vec![0.0; width];
            for r in &rows {
                for (j, v) in r.iter() {
                    mean[j] += v;
                }
            }
            mean.iter_mut().for_each(|m| *m /= n);
            // rows absent a feature contribute m² each
            let mut present = vec![0usize; width];
            let mut var = vec![0.0; width];
            for r in &rows {
                for (j, v) in r.iter() {
                    var[j] += (v - mean[j]) * (v - mean[j]);
                    present[j] += 1;
                }
            }
            for j in 0..width {
                var[j] = (var[j] + (rows.len() - present[j]) as f64 * mean[j] * mean[j]) / n;
            }
            (n, mean, var)
        };
        let (n_neg, mean_neg, var_neg) = moments(false);
        let (n_pos, mean_pos, var_pos) = moments(true);

        // largest per-feature variance over the whole training set
        let total = n_neg + n_pos;
        let mut max_var: f64 = 0.0;
        for j in 0..width {
            let m = (n_neg * mean_neg[j] + n_pos * mean_pos[j]) / total;
            let second = (n_neg * (var_neg[j] + mean_neg[j] * mean_neg[j])
                + n_pos * (var_pos[j] + mean_pos[j] * mean_pos[j]))
                / total;
            max_var = max_var.max(second - m * m);
        }
        let epsilon = if max_var > 0.0 {
            VAR_SMOOTHING * max_var
        } else {
            VAR_SMOOTHING
        };

        let stats = |n: f64, mean: Vec<f64>, mut var: Vec<f64>| {
            var.iter_mut().for_each(|v| *v += epsilon);
            let zero_row_loglik = mean
                .iter()
                .zip(&var)
                .map(|(m, s)| -0.5 * (2.0 * std::f64::consts::PI * s).ln() - m * m / (2.0 * s))
                .sum();
            ClassStats {
                log_prior: (n / total).ln(),
                mean,
                var,
                zero_row_loglik,
            }
        };
        GaussianNb {
            negative: stats(n_neg, mean_neg, var_neg),
            positive: stats(n_pos, mean_pos, var_pos),
        }
    }

    pub fn proba(&self, x: &SparseVector) -> f64 {
        super::sigmoid(self.positive.loglik(x) - self.negative.loglik(x))
    }

    /// Normalized `[P(negative), P(positive)]` via log-sum-exp.
    pub fn posterior(&self, x: &SparseVector) -> [f64; 2] {
        let a = self.negative.loglik(x);
        let b = self.positive.loglik(x);
        let m = a.max(b);
        let log_z = m + ((a - m).exp() + (b - m).exp()).ln();
        [(a - log_z).exp(), (b - log_z).exp()]
    }
}
