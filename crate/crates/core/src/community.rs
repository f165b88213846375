//! Growing core-communities from a ranked pair list.
//!
//! Pairs are consumed strictly in list order:
//!
//! 1. both endpoints unassigned: they found a new core-community;
//! 2. one endpoint assigned: the other joins its core;
//! 3. both in the same core: nothing happens;
//! 4. both in different cores: the pair is a *tide*. Cores stay as they
//!    are, but the two cores are joined at the real level.
//!
//! Real-communities are the connected components of cores under tides.
//! Nodes touched by no pair stay unassigned and become singletons whenever
//! a total partition is needed.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::selection::{RankedPair, RankedPairList};
use crate::similarity::{CitationMatrix, NodeId};

#[derive(Clone, Debug, PartialEq)]
pub struct CoreCommunity {
    pub id: usize,
    /// Members in the order they joined.
    pub members: Vec<NodeId>,
    pub founding_pair: RankedPair,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Tide {
    pub pair: RankedPair,
    /// Core of the selector when the pair was processed.
    pub core_a: usize,
    /// Core of the selected node when the pair was processed.
    pub core_b: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RealCommunity {
    pub id: usize,
    pub core_ids: Vec<usize>,
    pub members: Vec<NodeId>,
}

/// Where a detection result came from.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub strategy: String,
    #[serde(default)]
    pub params: BTreeMap<String, f64>,
    pub seed: Option<u64>,
}

impl Provenance {
    pub fn new(strategy: impl Into<String>) -> Self {
        Provenance {
            strategy: strategy.into(),
            ..Default::default()
        }
    }

    pub fn with_param(mut self, key: impl Into<String>, value: f64) -> Self {
        self.params.insert(key.into(), value);
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }
}

/// How tides are tallied in summaries.
#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum TideCount {
    /// Every pair that connected two different cores.
    #[default]
    Events,
    /// Only tides that joined two previously separate real-communities.
    Merges,
}

impl FromStr for TideCount {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "events" => Ok(TideCount::Events),
            "merges" => Ok(TideCount::Merges),
            other => Err(Error::Config(format!("unknown tide count mode `{other}`"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DetectionResult {
    pub n_nodes: usize,
    pub cores: Vec<CoreCommunity>,
    /// Real-communities over the cores. Unassigned nodes are not listed here;
    /// see [`DetectionResult::real_count`].
    pub reals: Vec<RealCommunity>,
    pub tides: Vec<Tide>,
    pub unassigned: Vec<NodeId>,
    pub provenance: Provenance,
}

impl DetectionResult {
    pub fn with_provenance(mut self, provenance: Provenance) -> Self {
        self.provenance = provenance;
        self
    }

    /// Real-level community count with unassigned nodes as singletons.
    pub fn real_count(&self) -> usize {
        self.reals.len() + self.unassigned.len()
    }

    /// Tides that reduced the number of real-communities.
    pub fn effective_merges(&self) -> usize {
        self.cores.len() - self.reals.len()
    }

    pub fn tide_count(&self, mode: TideCount) -> usize {
        match mode {
            TideCount::Events => self.tides.len(),
            TideCount::Merges => self.effective_merges(),
        }
    }

    /// Core id of every node, `None` for unassigned nodes.
    pub fn core_of(&self) -> Vec<Option<usize>> {
        let mut out = vec![None; self.n_nodes];
        for c in &self.cores {
            for m in &c.members {
                out[m.0] = Some(c.id);
            }
        }
        out
    }
}

/// Disjoint sets over core ids, union by size with path halving.
#[derive(Debug, Default)]
struct DisjointSet {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl DisjointSet {
    fn push(&mut self) -> usize {
        let id = self.parent.len();
        self.parent.push(id);
        self.size.push(1);
        id
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return;
        }
        if self.size[ra] < self.size[rb] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb] = ra;
        self.size[ra] += self.size[rb];
    }
}

pub fn build_communities(pairs: &RankedPairList, n_nodes: usize) -> Result<DetectionResult> {
    if let Some(node) = pairs.max_node().filter(|&m| m >= n_nodes) {
        return Err(Error::NodeOutOfRange { node, n_nodes });
    }

    let mut core_of: Vec<Option<usize>> = vec![None; n_nodes];
    let mut cores: Vec<CoreCommunity> = Vec::new();
    let mut tides = Vec::new();
    let mut real_sets = DisjointSet::default();

    for pair in pairs {
        let (a, b) = (pair.selector.0, pair.selected.0);
        match (core_of[a], core_of[b]) {
            (None, None) => {
                let id = real_sets.push();
                cores.push(CoreCommunity {
                    id,
                    members: if a == b {
                        vec![pair.selector]
                    } else {
                        vec![pair.selector, pair.selected]
                    },
                    founding_pair: *pair,
                });
                core_of[a] = Some(id);
                core_of[b] = Some(id);
            }
            (Some(c), None) => {
                cores[c].members.push(pair.selected);
                core_of[b] = Some(c);
            }
            (None, Some(c)) => {
                cores[c].members.push(pair.selector);
                core_of[a] = Some(c);
            }
            (Some(ca), Some(cb)) if ca == cb => {}
            (Some(ca), Some(cb)) => {
                tides.push(Tide {
                    pair: *pair,
                    core_a: ca,
                    core_b: cb,
                });
                real_sets.union(ca, cb);
            }
        }
    }

    // Real ids follow the smallest core id of each component.
    let mut real_of_root: BTreeMap<usize, usize> = BTreeMap::new();
    let mut reals: Vec<RealCommunity> = Vec::new();
    for core in &cores {
        let root = real_sets.find(core.id);
        let rid = *real_of_root.entry(root).or_insert_with(|| {
            reals.push(RealCommunity {
                id: reals.len(),
                core_ids: Vec::new(),
                members: Vec::new(),
            });
            reals.len() - 1
        });
        reals[rid].core_ids.push(core.id);
        reals[rid].members.extend_from_slice(&core.members);
    }

    let unassigned = (0..n_nodes)
        .filter(|&i| core_of[i].is_none())
        .map(NodeId)
        .collect();

    Ok(DetectionResult {
        n_nodes,
        cores,
        reals,
        tides,
        unassigned,
        provenance: Provenance::new("pairs"),
    })
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Level {
    Core,
    Real,
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Level::Core => "core",
            Level::Real => "real",
        })
    }
}

/// A total node-to-community labelling with dense labels.
///
/// Labels are canonical: numbered from 0 in order of first appearance when
/// scanning nodes by index. Two partitions grouping nodes identically are
/// therefore equal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Partition {
    labels: Vec<usize>,
    n_communities: usize,
    level: Option<Level>,
}

impl Partition {
    /// Relabels arbitrary labels into canonical dense form.
    pub fn from_labels<T: Ord + Clone>(raw: &[T]) -> Self {
        let mut seen: BTreeMap<T, usize> = BTreeMap::new();
        let labels: Vec<usize> = raw
            .iter()
            .map(|l| {
                let next = seen.len();
                *seen.entry(l.clone()).or_insert(next)
            })
            .collect();
        Partition {
            n_communities: seen.len(),
            labels,
            level: None,
        }
    }

    /// Partition from explicit groups. Nodes in no group become singletons.
    pub fn from_groups(n_nodes: usize, groups: &[Vec<usize>]) -> Result<Self> {
        let mut raw: Vec<Option<usize>> = vec![None; n_nodes];
        for (g, members) in groups.iter().enumerate() {
            for &m in members {
                if m >= n_nodes {
                    return Err(Error::NodeOutOfRange { node: m, n_nodes });
                }
                if raw[m].is_some() {
                    return Err(Error::Config(format!("node {m} appears in two groups")));
                }
                raw[m] = Some(g);
            }
        }
        let mut next = groups.len();
        let raw: Vec<usize> = raw
            .into_iter()
            .map(|l| {
                l.unwrap_or_else(|| {
                    next += 1;
                    next - 1
                })
            })
            .collect();
        Ok(Partition::from_labels(&raw))
    }

    pub fn singletons(n_nodes: usize) -> Self {
        Partition::from_labels(&(0..n_nodes).collect::<Vec<_>>())
    }

    pub fn with_level(mut self, level: Level) -> Self {
        self.level = Some(level);
        self
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn label(&self, node: usize) -> usize {
        self.labels[node]
    }

    pub fn n_nodes(&self) -> usize {
        self.labels.len()
    }

    pub fn n_communities(&self) -> usize {
        self.n_communities
    }

    pub fn level(&self) -> Option<Level> {
        self.level
    }

    /// Community sizes indexed by label.
    pub fn sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.n_communities];
        for &l in &self.labels {
            sizes[l] += 1;
        }
        sizes
    }

    /// Members of each community, indexed by label.
    pub fn groups(&self) -> Vec<Vec<usize>> {
        let mut groups = vec![Vec::new(); self.n_communities];
        for (node, &l) in self.labels.iter().enumerate() {
            groups[l].push(node);
        }
        groups
    }
}

pub fn extract_partition(r: &DetectionResult, level: Level) -> Partition {
    // Raw labels: community ids for assigned nodes, then fresh ids for the
    // unassigned ones. Canonical relabelling makes them dense.
    let offset = match level {
        Level::Core => r.cores.len(),
        Level::Real => r.reals.len(),
    };
    let mut raw = vec![usize::MAX; r.n_nodes];
    match level {
        Level::Core => {
            for c in &r.cores {
                for m in &c.members {
                    raw[m.0] = c.id;
                }
            }
        }
        Level::Real => {
            for c in &r.reals {
                for m in &c.members {
                    raw[m.0] = c.id;
                }
            }
        }
    }
    for (k, node) in r.unassigned.iter().enumerate() {
        raw[node.0] = offset + k;
    }
    Partition::from_labels(&raw).with_level(level)
}

/// Collapses each community into one node, summing citation blocks.
/// Citations inside a community land on the diagonal.
pub fn renormalize(m: &CitationMatrix, p: &Partition) -> Result<CitationMatrix> {
    if p.n_nodes() != m.n_nodes() {
        return Err(Error::PartitionMismatch {
            left: m.n_nodes(),
            right: p.n_nodes(),
        });
    }
    let mut coarse = CitationMatrix::new(p.n_communities());
    for i in 0..m.n_nodes() {
        for (j, c) in m.row(i) {
            coarse.add(p.label(i), p.label(j), c)?;
        }
    }
    Ok(coarse)
}
