//! Pair selection: every node picks one or more partners.
//!
//! All strategies emit directed `(selector, selected, similarity)` triples,
//! collected into a [`RankedPairList`] sorted by decreasing similarity with
//! ties in ascending `(selector, selected)` order.
//!
//! * MAX takes every partner attaining the row maximum (ties included).
//! * PSIM samples one partner with probability proportional to similarity,
//!   optionally restricted to the `n` most similar candidates.
//! * P samples one partner uniformly.
//! * MIXED flips a per-node coin between MAX and PSIM or P.
//! * MAX can also run under a per-row deletion mask.

use std::fmt;
use std::str::FromStr;

use rand::seq::index;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::seed::{stream_rng, Purpose, RngSeed};
use crate::similarity::{NodeId, SimilarityMatrix};

#[derive(Copy, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RankedPair {
    pub selector: NodeId,
    pub selected: NodeId,
    pub similarity: f64,
}

impl RankedPair {
    pub fn new(selector: usize, selected: usize, similarity: f64) -> Self {
        RankedPair {
            selector: NodeId(selector),
            selected: NodeId(selected),
            similarity,
        }
    }
}

/// Selected pairs in processing order.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct RankedPairList {
    pairs: Vec<RankedPair>,
}

impl RankedPairList {
    /// Sorts `pairs` into processing order.
    pub fn from_pairs(mut pairs: Vec<RankedPair>) -> Self {
        pairs.sort_by(|a, b| {
            b.similarity
                .total_cmp(&a.similarity)
                .then(a.selector.cmp(&b.selector))
                .then(a.selected.cmp(&b.selected))
        });
        RankedPairList { pairs }
    }

    /// Keeps `pairs` in the given order. Used to replay externally ranked
    /// lists such as a hand-written example.
    pub fn from_ordered(pairs: Vec<RankedPair>) -> Self {
        RankedPairList { pairs }
    }

    pub fn pairs(&self) -> &[RankedPair] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, RankedPair> {
        self.pairs.iter()
    }

    /// Whether the list satisfies the processing-order contract.
    pub fn is_sorted(&self) -> bool {
        self.pairs.windows(2).all(|w| {
            let (a, b) = (&w[0], &w[1]);
            a.similarity > b.similarity
                || (a.similarity == b.similarity
                    && (a.selector, a.selected) <= (b.selector, b.selected))
        })
    }

    /// Largest node index referenced, if any.
    pub fn max_node(&self) -> Option<usize> {
        self.pairs
            .iter()
            .map(|p| p.selector.0.max(p.selected.0))
            .max()
    }
}

impl<'a> IntoIterator for &'a RankedPairList {
    type Item = &'a RankedPair;
    type IntoIter = std::slice::Iter<'a, RankedPair>;
    fn into_iter(self) -> Self::IntoIter {
        self.pairs.iter()
    }
}

/// The randomized half of a mixed strategy.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RandomKind {
    Psim,
    P,
}

impl RandomKind {
    pub fn name(self) -> &'static str {
        match self {
            RandomKind::Psim => "psim",
            RandomKind::P => "p",
        }
    }
}

impl fmt::Display for RandomKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for RandomKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "psim" => Ok(RandomKind::Psim),
            "p" => Ok(RandomKind::P),
            other => Err(Error::Config(format!("unknown random kind `{other}`"))),
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum SelectionStrategy {
    Max,
    Psim,
    P,
    PsimTopN(usize),
    MaxDeleted(f64),
    Mixed { kind: RandomKind, probability: f64 },
}

impl SelectionStrategy {
    pub fn validate(&self) -> Result<()> {
        match *self {
            SelectionStrategy::PsimTopN(0) => {
                Err(Error::Config("top-n must be a positive integer".into()))
            }
            SelectionStrategy::MaxDeleted(d) if !(0.0..=1.0).contains(&d) => Err(Error::Config(
                format!("deletion fraction {d} is outside [0, 1]"),
            )),
            SelectionStrategy::Mixed { probability, .. } if !(0.0..=1.0).contains(&probability) => {
                Err(Error::Config(format!(
                    "mixture probability {probability} is outside [0, 1]"
                )))
            }
            _ => Ok(()),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            SelectionStrategy::Max => "max",
            SelectionStrategy::Psim => "psim",
            SelectionStrategy::P => "p",
            SelectionStrategy::PsimTopN(_) => "psim_topn",
            SelectionStrategy::MaxDeleted(_) => "max_deleted",
            SelectionStrategy::Mixed { .. } => "mixed",
        }
    }

    pub fn is_deterministic(&self) -> bool {
        matches!(self, SelectionStrategy::Max)
    }

    /// Runs the strategy. Deterministic strategies ignore `seed`.
    pub fn select(&self, s: &SimilarityMatrix, seed: RngSeed) -> Result<RankedPairList> {
        self.validate()?;
        Ok(match *self {
            SelectionStrategy::Max => select_max(s, None),
            SelectionStrategy::Psim => select_psim(s, seed, None),
            SelectionStrategy::P => select_random(s, seed),
            SelectionStrategy::PsimTopN(n) => select_psim(s, seed, Some(n)),
            SelectionStrategy::MaxDeleted(d) => {
                let mask = apply_random_deletion(s, d, seed);
                select_max(s, Some(&mask))
            }
            SelectionStrategy::Mixed { kind, probability } => {
                select_mixed(s, probability, kind, seed)
            }
        })
    }
}

/// Per-row deleted columns. Deleted entries are invisible to MAX.
#[derive(Clone, Debug, PartialEq)]
pub struct SimilarityMask {
    deleted: Vec<Vec<usize>>,
    fraction: f64,
    seed: RngSeed,
}

impl SimilarityMask {
    /// Builds a mask from explicit per-row deleted columns.
    pub fn from_rows(mut deleted: Vec<Vec<usize>>, fraction: f64, seed: RngSeed) -> Self {
        for row in &mut deleted {
            row.sort_unstable();
            row.dedup();
        }
        SimilarityMask {
            deleted,
            fraction,
            seed,
        }
    }

    /// Deleted columns of row `i`, ascending.
    pub fn deleted(&self, i: usize) -> &[usize] {
        self.deleted.get(i).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn is_deleted(&self, i: usize, j: usize) -> bool {
        self.deleted(i).binary_search(&j).is_ok()
    }

    pub fn fraction(&self) -> f64 {
        self.fraction
    }

    pub fn seed(&self) -> RngSeed {
        self.seed
    }
}

/// `floor(d * (n - 1))`, guarded against products such as `0.29 * 100`
/// landing a hair below an integer.
pub fn deletions_per_row(n_nodes: usize, d: f64) -> usize {
    if n_nodes < 2 {
        return 0;
    }
    let others = n_nodes - 1;
    let k = (d * others as f64 + 1e-9).floor() as usize;
    k.min(others)
}

/// Deletes a uniformly random set of `floor(d * (n - 1))` off-diagonal
/// columns from every row independently.
pub fn apply_random_deletion(s: &SimilarityMatrix, d: f64, seed: RngSeed) -> SimilarityMask {
    let n = s.n_nodes();
    let k = deletions_per_row(n, d);
    let deleted = (0..n)
        .into_par_iter()
        .map(|i| {
            if k == 0 {
                return Vec::new();
            }
            let mut rng = stream_rng(seed, Purpose::Deletion, i as u64);
            let mut cols: Vec<usize> = index::sample(&mut rng, n - 1, k)
                .into_iter()
                .map(|c| if c >= i { c + 1 } else { c })
                .collect();
            cols.sort_unstable();
            cols
        })
        .collect();
    SimilarityMask {
        deleted,
        fraction: d,
        seed,
    }
}

/// MAX choices of a single node: every visible partner attaining the row
/// maximum, or nothing when the visible row is empty or all zero.
fn max_partners(s: &SimilarityMatrix, i: usize, mask: Option<&SimilarityMask>) -> Vec<RankedPair> {
    let row = s.row(i);
    let deleted = mask.map(|m| m.deleted(i)).unwrap_or(&[]);
    let mut best = 0.0_f64;
    let mut partners = Vec::new();
    let mut del = deleted.iter().peekable();
    for (j, &v) in row.iter().enumerate() {
        if del.next_if(|&&c| c == j).is_some() || j == i {
            continue;
        }
        if v > best {
            best = v;
            partners.clear();
            partners.push(j);
        } else if v == best && v > 0.0 {
            partners.push(j);
        }
    }
    partners
        .into_iter()
        .map(|j| RankedPair::new(i, j, best))
        .collect()
}

pub fn select_max(s: &SimilarityMatrix, mask: Option<&SimilarityMask>) -> RankedPairList {
    let pairs = (0..s.n_nodes())
        .into_par_iter()
        .flat_map_iter(|i| max_partners(s, i, mask))
        .collect();
    RankedPairList::from_pairs(pairs)
}

/// Candidate partners of `i` for PSIM: all other nodes in ascending order,
/// or the `topn` most similar (ties at the cut broken by ascending id).
fn psim_candidates(s: &SimilarityMatrix, i: usize, topn: Option<usize>) -> Vec<usize> {
    let mut cands: Vec<usize> = (0..s.n_nodes()).filter(|&j| j != i).collect();
    if let Some(n) = topn {
        if n < cands.len() {
            let row = s.row(i);
            cands.sort_by(|&a, &b| row[b].total_cmp(&row[a]).then(a.cmp(&b)));
            cands.truncate(n);
            cands.sort_unstable();
        }
    }
    cands
}

fn psim_partner(
    s: &SimilarityMatrix,
    i: usize,
    seed: RngSeed,
    topn: Option<usize>,
) -> Option<RankedPair> {
    let row = s.row(i);
    let cands = psim_candidates(s, i, topn);
    let mut cumulative = Vec::with_capacity(cands.len());
    let mut total = 0.0;
    for &j in &cands {
        total += row[j];
        cumulative.push(total);
    }
    if total <= 0.0 {
        return None;
    }
    let mut rng = stream_rng(seed, Purpose::Sample, i as u64);
    let u = rng.random_range(0.0..total);
    let pos = cumulative.iter().position(|&c| u < c).unwrap_or_else(|| {
        // u rounded onto the last boundary; fall back to the last
        // candidate that carries mass.
        cands.iter().rposition(|&j| row[j] > 0.0).unwrap_or(0)
    });
    let j = cands[pos];
    Some(RankedPair::new(i, j, row[j]))
}

fn uniform_partner(s: &SimilarityMatrix, i: usize, seed: RngSeed) -> Option<RankedPair> {
    let n = s.n_nodes();
    if n < 2 {
        return None;
    }
    let mut rng = stream_rng(seed, Purpose::Sample, i as u64);
    let mut j = rng.random_range(0..n - 1);
    if j >= i {
        j += 1;
    }
    Some(RankedPair::new(i, j, s.get(i, j)))
}

/// PSIM: one partner per node with probability `S_ij / sum_k S_ik` over the
/// candidate set. Nodes with zero candidate mass emit nothing.
pub fn select_psim(s: &SimilarityMatrix, seed: RngSeed, topn: Option<usize>) -> RankedPairList {
    let pairs = (0..s.n_nodes())
        .into_par_iter()
        .filter_map(|i| psim_partner(s, i, seed, topn))
        .collect();
    RankedPairList::from_pairs(pairs)
}

/// P: one uniformly random partner per node.
pub fn select_random(s: &SimilarityMatrix, seed: RngSeed) -> RankedPairList {
    let pairs = (0..s.n_nodes())
        .into_par_iter()
        .filter_map(|i| uniform_partner(s, i, seed))
        .collect();
    RankedPairList::from_pairs(pairs)
}

/// For each node, whether the mixed strategy uses MAX (`true`) or the
/// randomized strategy (`false`). Each node uses the randomized strategy
/// with probability `p`.
pub fn mixture_uses_max(n_nodes: usize, p: f64, seed: RngSeed) -> Vec<bool> {
    (0..n_nodes)
        .map(|i| !stream_rng(seed, Purpose::Mixture, i as u64).random_bool(p))
        .collect()
}

/// Per-node Bernoulli mixture of MAX and `kind`.
///
/// The coin and the partner draw use separate streams, so `p = 1` yields
/// exactly the pure randomized list for the same seed and `p = 0` yields
/// exactly the MAX list.
pub fn select_mixed(
    s: &SimilarityMatrix,
    p: f64,
    kind: RandomKind,
    seed: RngSeed,
) -> RankedPairList {
    let uses_max = mixture_uses_max(s.n_nodes(), p, seed);
    let pairs = (0..s.n_nodes())
        .into_par_iter()
        .flat_map_iter(|i| {
            if uses_max[i] {
                max_partners(s, i, None)
            } else {
                let pick = match kind {
                    RandomKind::Psim => psim_partner(s, i, seed, None),
                    RandomKind::P => uniform_partner(s, i, seed),
                };
                pick.into_iter().collect()
            }
        })
        .collect();
    RankedPairList::from_pairs(pairs)
}
