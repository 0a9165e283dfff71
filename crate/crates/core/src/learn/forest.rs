// SPDX-License-Identifier: Apache-2.0

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::tree::{Criterion, GrowConfig, Grower, Tree};
use super::LearnerParams;
use crate::features::SparseVector;

fn targets(y: &[bool]) -> Vec<f64> {
    y.iter().map(|&b| f64::from(u8::from(b))).collect()
}

fn positive_fraction(y: &[f64]) -> impl Fn(&[u32]) -> f64 + '_ {
    move |rows| rows.iter().map(|&r| y[r as usize]).sum::<f64>() / rows.len() as f64
}

/// Single CART tree on Gini impurity; leaf value is the positive fraction.
pub(super) fn train_tree(params: &LearnerParams, x: &[SparseVector], y: &[bool], width: usize) -> Tree {
    let g = targets(y);
    let h = vec![1.0; y.len()];
    let config = GrowConfig {
        criterion: Criterion::Gini,
        max_depth: params.max_depth,
        min_rows: params.min_rows,
        features_per_split: params.max_features,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let sample: Vec<u32> = (0..x.len() as u32).collect();
    Grower::new(x, &g, &h, width, &config, Some(&mut rng))
        .grow(&sample, positive_fraction(&g))
        .tree
}

/// Bootstrap forest. Each tree owns a seed drawn up front from the master
/// stream, so parallel training is bit-identical to sequential training.
pub(super) fn train_forest(params: &LearnerParams, x: &[SparseVector], y: &[bool], width: usize) -> Vec<Tree> {
    let g = targets(y);
    let h = vec![1.0; y.len()];
    let per_split = params
        .max_features
        .unwrap_or_else(|| ((width as f64).sqrt().floor() as usize).max(1));
    let config = GrowConfig {
        criterion: Criterion::Gini,
        max_depth: params.max_depth,
        min_rows: params.min_rows,
        features_per_split: Some(per_split),
    };
    let mut master = ChaCha8Rng::seed_from_u64(params.seed);
    let seeds: Vec<u64> = (0..params.n_trees).map(|_| master.gen()).collect();
    seeds
        .par_iter()
        .map(|&seed| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let n = x.len() as u32;
            let sample: Vec<u32> = (0..n).map(|_| rng.gen_range(0..n)).collect();
            Grower::new(x, &g, &h, width, &config, Some(&mut rng))
                .grow(&sample, positive_fraction(&g))
                .tree
        })
        .collect()
}
