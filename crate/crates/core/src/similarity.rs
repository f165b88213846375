//! Citation counts, row normalization and cosine similarity.
//!
//! A node's citation pattern is its outgoing count row divided by the row
//! sum. Two nodes are compared by the cosine of their normalized rows, so
//! similarities lie in `[0, 1]` for nonnegative data. Rows that cite nothing
//! are kept and compare as `0` against every other node.

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Dense node index in `[0, n)`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct NodeId(pub usize);

impl NodeId {
    #[inline]
    pub fn index(self) -> usize {
        self.0
    }
}

impl From<usize> for NodeId {
    fn from(i: usize) -> Self {
        NodeId(i)
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Sparse nonnegative citation counts between `n` nodes.
///
/// Row `i` holds the citations made by node `i`. Zero counts are never
/// stored, and adding to an existing cell accumulates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CitationMatrix {
    rows: Vec<BTreeMap<usize, u64>>,
    labels: Option<Vec<String>>,
}

impl CitationMatrix {
    pub fn new(n_nodes: usize) -> Self {
        CitationMatrix {
            rows: vec![BTreeMap::new(); n_nodes],
            labels: None,
        }
    }

    /// Builds a matrix from dense rows. Every row must have `rows.len()` entries.
    pub fn from_dense(rows: &[Vec<u64>]) -> Result<Self> {
        let n = rows.len();
        let mut m = CitationMatrix::new(n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::Config(format!(
                    "dense row {i} has {} entries, expected {n}",
                    row.len()
                )));
            }
            for (j, &c) in row.iter().enumerate() {
                m.add(i, j, c)?;
            }
        }
        Ok(m)
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.n_nodes() {
            return Err(Error::Config(format!(
                "{} labels given for {} nodes",
                labels.len(),
                self.n_nodes()
            )));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    /// Adds `count` citations from `src` to `dst`.
    pub fn add(&mut self, src: usize, dst: usize, count: u64) -> Result<()> {
        let n = self.n_nodes();
        for node in [src, dst] {
            if node >= n {
                return Err(Error::NodeOutOfRange { node, n_nodes: n });
            }
        }
        if count > 0 {
            *self.rows[src].entry(dst).or_insert(0) += count;
        }
        Ok(())
    }

    #[inline]
    pub fn n_nodes(&self) -> usize {
        self.rows.len()
    }

    pub fn get(&self, src: usize, dst: usize) -> u64 {
        self.rows[src].get(&dst).copied().unwrap_or(0)
    }

    /// Nonzero entries of row `i` in ascending column order.
    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, u64)> + '_ {
        self.rows[i].iter().map(|(&j, &c)| (j, c))
    }

    pub fn row_sum(&self, i: usize) -> u64 {
        self.rows[i].values().sum()
    }

    pub fn total(&self) -> u64 {
        self.rows.iter().flat_map(|r| r.values()).sum()
    }

    /// Number of stored (nonzero) cells.
    pub fn nnz(&self) -> usize {
        self.rows.iter().map(BTreeMap::len).sum()
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn to_dense(&self) -> Vec<Vec<u64>> {
        let n = self.n_nodes();
        self.rows
            .iter()
            .map(|r| {
                let mut dense = vec![0; n];
                for (&j, &c) in r {
                    dense[j] = c;
                }
                dense
            })
            .collect()
    }
}

/// A citation row divided by its sum.
#[derive(Clone, Debug, PartialEq)]
pub struct NormalizedRow {
    entries: Vec<(usize, f64)>,
    zero_sum: bool,
}

impl NormalizedRow {
    /// Normalizes sparse `(column, count)` entries given in ascending column order.
    pub fn from_counts<I>(counts: I) -> Self
    where
        I: IntoIterator<Item = (usize, u64)>,
    {
        let counts: Vec<(usize, u64)> = counts.into_iter().filter(|&(_, c)| c > 0).collect();
        let sum: u64 = counts.iter().map(|&(_, c)| c).sum();
        if sum == 0 {
            return NormalizedRow {
                entries: Vec::new(),
                zero_sum: true,
            };
        }
        let sum = sum as f64;
        NormalizedRow {
            entries: counts
                .into_iter()
                .map(|(k, c)| (k, c as f64 / sum))
                .collect(),
            zero_sum: false,
        }
    }

    /// Sparse `(column, fraction)` entries in ascending column order.
    pub fn entries(&self) -> &[(usize, f64)] {
        &self.entries
    }

    /// Whether the raw row summed to zero.
    pub fn is_zero(&self) -> bool {
        self.zero_sum
    }

    pub fn get(&self, column: usize) -> f64 {
        self.entries
            .binary_search_by_key(&column, |&(k, _)| k)
            .map(|pos| self.entries[pos].1)
            .unwrap_or(0.0)
    }

    fn norm(&self) -> f64 {
        self.entries.iter().map(|&(_, v)| v * v).sum::<f64>().sqrt()
    }
}

pub fn normalize_rows(m: &CitationMatrix) -> Vec<NormalizedRow> {
    (0..m.n_nodes())
        .map(|i| NormalizedRow::from_counts(m.row(i)))
        .collect()
}

/// Dot product over the shared support, accumulated in ascending column order.
fn sparse_dot(a: &[(usize, f64)], b: &[(usize, f64)]) -> f64 {
    let (mut x, mut y) = (0, 0);
    let mut acc = 0.0;
    while x < a.len() && y < b.len() {
        match a[x].0.cmp(&b[y].0) {
            std::cmp::Ordering::Less => x += 1,
            std::cmp::Ordering::Greater => y += 1,
            std::cmp::Ordering::Equal => {
                acc += a[x].1 * b[y].1;
                x += 1;
                y += 1;
            }
        }
    }
    acc
}

fn cosine_with_norms(a: &NormalizedRow, na: f64, b: &NormalizedRow, nb: f64) -> f64 {
    if a.zero_sum || b.zero_sum || na == 0.0 || nb == 0.0 {
        return 0.0;
    }
    (sparse_dot(&a.entries, &b.entries) / (na * nb)).min(1.0)
}

/// Cosine of two normalized rows; `0` when either row is empty.
pub fn cosine_similarity(a: &NormalizedRow, b: &NormalizedRow) -> f64 {
    cosine_with_norms(a, a.norm(), b, b.norm())
}

/// Symmetric pairwise similarities. The diagonal is stored as `0` and is
/// never consulted by the selection strategies.
#[derive(Clone, Debug, PartialEq)]
pub struct SimilarityMatrix {
    n: usize,
    values: Vec<f64>,
}

impl SimilarityMatrix {
    /// Wraps dense similarity rows after checking shape, symmetry and range.
    /// Diagonal entries are ignored.
    pub fn from_dense(rows: Vec<Vec<f64>>) -> Result<Self> {
        let n = rows.len();
        let mut values = vec![0.0; n * n];
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidSimilarity(format!(
                    "row {i} has {} entries, expected {n}",
                    row.len()
                )));
            }
            for (j, &v) in row.iter().enumerate() {
                if i == j {
                    continue;
                }
                if !(0.0..=1.0 + 1e-12).contains(&v) {
                    return Err(Error::InvalidSimilarity(format!(
                        "S[{i}][{j}] = {v} is outside [0, 1]"
                    )));
                }
                if (v - rows[j][i]).abs() > 1e-12 {
                    return Err(Error::InvalidSimilarity(format!(
                        "S[{i}][{j}] = {v} but S[{j}][{i}] = {}",
                        rows[j][i]
                    )));
                }
                values[i * n + j] = v;
            }
        }
        Ok(SimilarityMatrix { n, values })
    }

    #[inline]
    pub fn n_nodes(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.n + j]
    }

    /// Row `i` including the (meaningless) diagonal slot.
    #[inline]
    pub fn row(&self, i: usize) -> &[f64] {
        &self.values[i * self.n..(i + 1) * self.n]
    }
}

/// Computes all pairwise cosine similarities.
///
/// Rows are computed in parallel. Each pair is evaluated exactly once with a
/// fixed accumulation order and mirrored, so the result is bitwise identical
/// for any thread count.
pub fn build_similarity_matrix(m: &CitationMatrix) -> SimilarityMatrix {
    let rows = normalize_rows(m);
    let norms: Vec<f64> = rows.iter().map(NormalizedRow::norm).collect();
    let n = rows.len();

    let upper: Vec<Vec<f64>> = (0..n)
        .into_par_iter()
        .map(|i| {
            ((i + 1)..n)
                .map(|j| cosine_with_norms(&rows[i], norms[i], &rows[j], norms[j]))
                .collect()
        })
        .collect();

    let mut values = vec![0.0; n * n];
    for (i, tail) in upper.into_iter().enumerate() {
        for (off, v) in tail.into_iter().enumerate() {
            let j = i + 1 + off;
            values[i * n + j] = v;
            values[j * n + i] = v;
        }
    }
    SimilarityMatrix { n, values }
}
