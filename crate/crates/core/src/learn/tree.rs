// SPDX-License-Identifier: Apache-2.0

//! Binary CART grower shared by every tree-based learner.
//!
//! Rows are sparse; an absent entry reads as 0.0. Per node, candidate
//! thresholds are midpoints between consecutive distinct values of each
//! feature. The best split maximizes the criterion's child score; ties go
//! to the lowest feature index, then the lowest threshold.

use rand::seq::index;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::features::SparseVector;

/// Smallest criterion improvement that justifies a split.
const MIN_GAIN: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum Criterion {
    /// Gini impurity over 0/1 targets carried in `g`.
    Gini,
    /// Squared-error reduction on the targets carried in `g`.
    Variance,
    /// Second-order gain `½ G²/(H+λ)` with gradients in `g`, hessians in `h`.
    Newton { lambda: f64 },
}

impl Criterion {
    /// Node score; a split's gain is `score(left) + score(right) - score(parent)`.
    fn score(self, s: &Stats) -> f64 {
        match self {
            Criterion::Gini => {
                if s.n == 0.0 {
                    0.0
                } else {
                    -2.0 * s.g * (s.n - s.g) / s.n
                }
            }
            Criterion::Variance => {
                if s.n == 0.0 {
                    0.0
                } else {
                    s.g * s.g / s.n
                }
            }
            Criterion::Newton { lambda } => 0.5 * s.g * s.g / (s.h + lambda),
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub(crate) struct Stats {
    pub g: f64,
    pub h: f64,
    pub n: f64,
}

impl Stats {
    fn add(&mut self, g: f64, h: f64) {
        self.g += g;
        self.h += h;
        self.n += 1.0;
    }

    fn plus(self, o: Stats) -> Stats {
        Stats {
            g: self.g + o.g,
            h: self.h + o.h,
            n: self.n + o.n,
        }
    }

    fn minus(self, o: Stats) -> Stats {
        Stats {
            g: self.g - o.g,
            h: self.h - o.h,
            n: self.n - o.n,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Node {
    Split {
        feature: u32,
        threshold: f64,
        left: u32,
        right: u32,
    },
    Leaf {
        value: f64,
    },
}

/// Flat binary tree; node 0 is the root. Rows with `x[feature] <= threshold` go left.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tree {
    nodes: Vec<Node>,
}

impl Tree {
    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn leaf_index(&self, x: &SparseVector) -> usize {
        let mut i = 0;
        loop {
            match self.nodes[i] {
                Node::Leaf { .. } => return i,
                Node::Split {
                    feature,
                    threshold,
                    left,
                    right,
                } => {
                    i = if x.get(feature as usize) <= threshold {
                        left as usize
                    } else {
                        right as usize
                    };
                }
            }
        }
    }

    pub fn predict(&self, x: &SparseVector) -> f64 {
        match self.nodes[self.leaf_index(x)] {
            Node::Leaf { value } => value,
            Node::Split { .. } => unreachable!("leaf_index returns a leaf"),
        }
    }

    pub fn depth(&self) -> usize {
        fn walk(nodes: &[Node], i: usize) -> usize {
            match nodes[i] {
                Node::Leaf { .. } => 0,
                Node::Split { left, right, .. } => 1 + walk(nodes, left as usize).max(walk(nodes, right as usize)),
            }
        }
        walk(&self.nodes, 0)
    }

    pub fn n_leaves(&self) -> usize {
        self.nodes.iter().filter(|n| matches!(n, Node::Leaf { .. })).count()
    }

    pub(crate) fn scale_leaves(&mut self, factor: f64) {
        for node in &mut self.nodes {
            if let Node::Leaf { value } = node {
                *value *= factor;
            }
        }
    }
}

pub(crate) struct GrowConfig {
    pub criterion: Criterion,
    pub max_depth: usize,
    pub min_rows: usize,
    /// Features drawn per split; `None` considers all.
    pub features_per_split: Option<usize>,
}

#[derive(Debug, Clone, Copy)]
struct Split {
    feature: u32,
    threshold: f64,
    children_score: f64,
}

/// Result of growing: the tree and, for each entry of the sample, the leaf it landed in.
pub(crate) struct Grown {
    pub tree: Tree,
    pub leaf_of_sample: Vec<u32>,
}

pub(crate) struct Grower<'a, R: Rng> {
    rows: &'a [SparseVector],
    g: &'a [f64],
    h: &'a [f64],
    width: usize,
    config: &'a GrowConfig,
    rng: Option<&'a mut R>,
    nodes: Vec<Node>,
    leaf_of_sample: Vec<u32>,
}

impl<'a, R: Rng> Grower<'a, R> {
    pub fn new(
        rows: &'a [SparseVector],
        g: &'a [f64],
        h: &'a [f64],
        width: usize,
        config: &'a GrowConfig,
        rng: Option<&'a mut R>,
    ) -> Self {
        Grower {
            rows,
            g,
            h,
            width,
            config,
            rng,
            nodes: Vec::new(),
            leaf_of_sample: Vec::new(),
        }
    }

    /// Grows a tree over `sample` (row indices, repeats allowed). Leaf values
    /// come from `leaf_value` applied to the leaf's sample positions.
    pub fn grow(mut self, sample: &[u32], leaf_value: impl Fn(&[u32]) -> f64) -> Grown {
        self.leaf_of_sample = vec![0; sample.len()];
        let positions: Vec<u32> = (0..sample.len() as u32).collect();
        self.nodes.push(Node::Leaf { value: 0.0 });
        let mut stack = vec![(0usize, positions, 0usize)];
        while let Some((node, positions, depth)) = stack.pop() {
            let split = if depth < self.config.max_depth && positions.len() >= 2 * self.config.min_rows {
                self.best_split(sample, &positions)
            } else {
                None
            };
            match split {
                None => {
                    let rows: Vec<u32> = positions.iter().map(|&p| sample[p as usize]).collect();
                    self.nodes[node] = Node::Leaf {
                        value: leaf_value(&rows),
                    };
                    for &p in &positions {
                        self.leaf_of_sample[p as usize] = node as u32;
                    }
                }
                Some(split) => {
                    let (left_pos, right_pos): (Vec<u32>, Vec<u32>) = positions.iter().partition(|&&p| {
                        self.rows[sample[p as usize] as usize].get(split.feature as usize) <= split.threshold
                    });
                    let left = self.nodes.len();
                    self.nodes.push(Node::Leaf { value: 0.0 });
                    self.nodes.push(Node::Leaf { value: 0.0 });
                    self.nodes[node] = Node::Split {
                        feature: split.feature,
                        threshold: split.threshold,
                        left: left as u32,
                        right: left as u32 + 1,
                    };
                    stack.push((left + 1, right_pos, depth + 1));
                    stack.push((left, left_pos, depth + 1));
                }
            }
        }
        Grown {
            tree: Tree { nodes: self.nodes },
            leaf_of_sample: self.leaf_of_sample,
        }
    }

    fn allowed_features(&mut self) -> Option<Vec<bool>> {
        let k = self.config.features_per_split?;
        if k >= self.width {
            return None;
        }
        let rng = self.rng.as_deref_mut().expect("feature sampling needs an rng");
        let mut mask = vec![false; self.width];
        for f in index::sample(rng, self.width, k) {
            mask[f] = true;
        }
        Some(mask)
    }

    fn best_split(&mut self, sample: &[u32], positions: &[u32]) -> Option<Split> {
        let criterion = self.config.criterion;
        let min_rows = self.config.min_rows as f64;
        let mask = self.allowed_features();

        let mut total = Stats::default();
        let mut entries: Vec<(u32, f64, u32)> = Vec::new();
        for &p in positions {
            let r = sample[p as usize];
            total.add(self.g[r as usize], self.h[r as usize]);
            for (f, v) in self.rows[r as usize].iter() {
                if mask.as_ref().is_none_or(|m| m[f]) {
                    entries.push((f as u32, v, r));
                }
            }
        }
        let parent_score = criterion.score(&total);
        entries.sort_unstable_by(|a, b| a.0.cmp(&b.0).then(a.1.total_cmp(&b.1)));

        let mut best: Option<Split> = None;
        let mut buckets: Vec<(f64, Stats)> = Vec::new();
        let mut start = 0;
        while start < entries.len() {
            let feature = entries[start].0;
            let mut end = start;
            while end < entries.len() && entries[end].0 == feature {
                end += 1;
            }
            // distinct-value buckets with the implicit zeros slotted in order
            buckets.clear();
            let mut nonzero = Stats::default();
            for &(_, v, r) in &entries[start..end] {
                let (g, h) = (self.g[r as usize], self.h[r as usize]);
                nonzero.add(g, h);
                match buckets.last_mut() {
                    Some((last, s)) if *last == v => s.add(g, h),
                    _ => {
                        let mut s = Stats::default();
                        s.add(g, h);
                        buckets.push((v, s));
                    }
                }
            }
            let zeros = total.minus(nonzero);
            if zeros.n > 0.0 {
                let at = buckets.partition_point(|(v, _)| *v < 0.0);
                buckets.insert(at, (0.0, zeros));
            }

            let mut left = Stats::default();
            for i in 0..buckets.len().saturating_sub(1) {
                left = left.plus(buckets[i].1);
                let right = total.minus(left);
                if left.n < min_rows || right.n < min_rows {
                    continue;
                }
                let children_score = criterion.score(&left) + criterion.score(&right);
                let better = match best {
                    None => true,
                    Some(b) => children_score > b.children_score + MIN_GAIN * b.children_score.abs().max(1.0),
                };
                if better {
                    best = Some(Split {
                        feature,
                        threshold: 0.5 * (buckets[i].0 + buckets[i + 1].0),
                        children_score,
                    });
                }
            }
            start = end;
        }
        best.filter(|b| b.children_score - parent_score > MIN_GAIN * parent_score.abs().max(1.0))
    }
}
