// SPDX-License-Identifier: Apache-2.0

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Fixed-width vector holding only its non-zero entries, indices strictly increasing.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SparseVector {
    width: usize,
    indices: Vec<u32>,
    values: Vec<f64>,
}

impl SparseVector {
    pub fn zeros(width: usize) -> Self {
        SparseVector {
            width,
            indices: Vec::new(),
            values: Vec::new(),
        }
    }

    /// Builds a vector from (index, value) pairs; zero values are dropped.
    pub fn from_pairs(width: usize, mut pairs: Vec<(u32, f64)>) -> Result<Self> {
        pairs.sort_by_key(|&(i, _)| i);
        if pairs.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::param("duplicate index in sparse vector"));
        }
        if let Some(&(i, _)) = pairs.last() {
            if i as usize >= width {
                return Err(Error::param(format!("index {i} out of width {width}")));
            }
        }
        let (indices, values) = pairs.into_iter().filter(|&(_, v)| v != 0.0).unzip();
        Ok(SparseVector { width, indices, values })
    }

    pub fn from_dense(dense: &[f64]) -> Self {
        let (indices, values) = dense
            .iter()
            .enumerate()
            .filter(|(_, &v)| v != 0.0)
            .map(|(i, &v)| (i as u32, v))
            .unzip();
        SparseVector {
            width: dense.len(),
            indices,
            values,
        }
    }

    pub fn to_dense(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.width];
        for (&i, &v) in self.indices.iter().zip(&self.values) {
            out[i as usize] = v;
        }
        out
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn nnz(&self) -> usize {
        self.indices.len()
    }

    pub fn indices(&self) -> &[u32] {
        &self.indices
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.indices.iter().zip(&self.values).map(|(&i, &v)| (i as usize, v))
    }

    /// Value at `index`; absent entries read as 0.0.
    pub fn get(&self, index: usize) -> f64 {
        match self.indices.binary_search(&(index as u32)) {
            Ok(p) => self.values[p],
            Err(_) => 0.0,
        }
    }

    pub fn l2_norm(&self) -> f64 {
        self.values.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn dot(&self, weights: &[f64]) -> f64 {
        self.iter().map(|(i, v)| v * weights[i]).sum()
    }

    /// Scales to unit L2 norm; the zero vector is left unchanged.
    pub fn normalized(mut self) -> Self {
        let norm = self.l2_norm();
        if norm > 0.0 {
            for v in &mut self.values {
                *v /= norm;
            }
        }
        self
    }

    /// Concatenates blocks left to right, offsetting indices by the preceding widths.
    pub fn concat(blocks: &[&SparseVector]) -> Self {
        let mut out = SparseVector::zeros(0);
        for block in blocks {
            let offset = out.width as u32;
            out.indices.extend(block.indices.iter().map(|&i| i + offset));
            out.values.extend_from_slice(&block.values);
            out.width += block.width;
        }
        out
    }
}
