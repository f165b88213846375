//! Partition comparison and result summaries.
//!
//! NMI uses the arithmetic-mean normalization
//! `(H(X) + H(Y) - H(X,Y)) / ((H(X) + H(Y)) / 2)` with entropies in bits.
//! Entropy sums run over sorted counts, which makes every quantity here
//! exactly invariant under relabeling and argument order.

use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use crate::community::{extract_partition, DetectionResult, Level, Partition, TideCount};
use crate::error::{Error, Result};

/// Joint label counts of two partitions over the same nodes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContingencyTable {
    counts: HashMap<(usize, usize), usize>,
    n: usize,
}

impl ContingencyTable {
    pub fn new(x: &Partition, y: &Partition) -> Result<Self> {
        check_same_nodes(x, y)?;
        let mut counts = HashMap::new();
        for (&a, &b) in x.labels().iter().zip(y.labels()) {
            *counts.entry((a, b)).or_insert(0) += 1;
        }
        Ok(ContingencyTable {
            counts,
            n: x.n_nodes(),
        })
    }

    pub fn get(&self, label_x: usize, label_y: usize) -> usize {
        self.counts.get(&(label_x, label_y)).copied().unwrap_or(0)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Nonzero cells.
    pub fn n_cells(&self) -> usize {
        self.counts.len()
    }

    pub fn cell_counts(&self) -> impl Iterator<Item = usize> + '_ {
        self.counts.values().copied()
    }
}

fn check_same_nodes(x: &Partition, y: &Partition) -> Result<()> {
    if x.n_nodes() != y.n_nodes() {
        return Err(Error::PartitionMismatch {
            left: x.n_nodes(),
            right: y.n_nodes(),
        });
    }
    Ok(())
}

/// Shannon entropy in bits of the distribution `counts / n`.
fn entropy_of_counts(mut counts: Vec<usize>, n: usize) -> f64 {
    if n == 0 {
        return 0.0;
    }
    counts.sort_unstable();
    let n = n as f64;
    let h: f64 = counts
        .into_iter()
        .filter(|&c| c > 0)
        .map(|c| {
            let p = c as f64 / n;
            -p * p.log2()
        })
        .sum();
    // a single block gives -1 * log2(1) = -0.0
    h.max(0.0)
}

pub fn entropy(p: &Partition) -> f64 {
    entropy_of_counts(p.sizes(), p.n_nodes())
}

pub fn joint_entropy(x: &Partition, y: &Partition) -> Result<f64> {
    let table = ContingencyTable::new(x, y)?;
    Ok(entropy_of_counts(table.cell_counts().collect(), table.n()))
}

/// NMI together with a flag for the degenerate `0 / 0` case.
#[derive(Copy, Clone, Debug, PartialEq, Serialize)]
pub struct NmiScore {
    pub value: f64,
    /// Both partitions were a single community. The value is then defined as 1.
    pub both_trivial: bool,
}

pub fn nmi_score(x: &Partition, y: &Partition) -> Result<NmiScore> {
    let hxy = joint_entropy(x, y)?;
    let denom = entropy(x) + entropy(y);
    if denom == 0.0 {
        return Ok(NmiScore {
            value: 1.0,
            both_trivial: true,
        });
    }
    let value = ((denom - hxy) / (denom / 2.0)).clamp(0.0, 1.0);
    Ok(NmiScore {
        value,
        both_trivial: false,
    })
}

pub fn nmi(x: &Partition, y: &Partition) -> Result<f64> {
    nmi_score(x, y).map(|s| s.value)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SizeStats {
    pub count: usize,
    pub min: usize,
    pub max: usize,
    pub mean: f64,
    /// size -> number of communities of that size
    pub histogram: BTreeMap<usize, usize>,
}

impl SizeStats {
    pub fn from_sizes(sizes: &[usize]) -> Self {
        let mut histogram = BTreeMap::new();
        for &s in sizes {
            *histogram.entry(s).or_insert(0) += 1;
        }
        SizeStats {
            count: sizes.len(),
            min: sizes.iter().copied().min().unwrap_or(0),
            max: sizes.iter().copied().max().unwrap_or(0),
            mean: if sizes.is_empty() {
                0.0
            } else {
                sizes.iter().sum::<usize>() as f64 / sizes.len() as f64
            },
            histogram,
        }
    }
}

/// Counts and size distributions of a detection result.
///
/// `reals` counts unassigned nodes as singleton real-communities; `cores`
/// counts grown cores only.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PartitionStats {
    pub n_nodes: usize,
    pub cores: usize,
    pub reals: usize,
    pub tides: usize,
    pub tide_events: usize,
    pub effective_merges: usize,
    pub unassigned: usize,
    pub core_sizes: SizeStats,
    pub real_sizes: SizeStats,
}

pub fn partition_stats(r: &DetectionResult, tide_count: TideCount) -> PartitionStats {
    let core_sizes: Vec<usize> = r.cores.iter().map(|c| c.members.len()).collect();
    PartitionStats {
        n_nodes: r.n_nodes,
        cores: r.cores.len(),
        reals: r.real_count(),
        tides: r.tide_count(tide_count),
        tide_events: r.tides.len(),
        effective_merges: r.effective_merges(),
        unassigned: r.unassigned.len(),
        core_sizes: SizeStats::from_sizes(&core_sizes),
        real_sizes: SizeStats::from_sizes(&extract_partition(r, Level::Real).sizes()),
    }
}
