//! Planted-partition citation matrices.
//!
//! Node `i` in block `b(i)` cites node `j != i` with weight
//! `activity(i) * rate(b(i), b(j))`, where the rate is `in_block_rate` inside
//! a block and `cross_block_rate` across blocks. The node of rank `r`
//! (1-based, within its block) has activity `r^-activity_exponent`, so an
//! exponent of 0 gives every node the same expected volume. Exactly
//! `volume` citations are then drawn from the multinomial over all cells.

use rand_distr::{Binomial, Distribution};
use serde::{Deserialize, Serialize};

use crate::community::Partition;
use crate::error::{Error, Result};
use crate::seed::{stream_rng, Purpose, RngSeed};
use crate::similarity::CitationMatrix;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SyntheticSpec {
    pub block_sizes: Vec<usize>,
    pub in_block_rate: f64,
    pub cross_block_rate: f64,
    pub volume: u64,
    pub activity_exponent: f64,
    pub seed: RngSeed,
}

impl Default for SyntheticSpec {
    /// Four blocks of 25 nodes, 10:1 rate ratio, 50,000 citations, activity
    /// exponent 1.5.
    fn default() -> Self {
        SyntheticSpec {
            block_sizes: vec![25; 4],
            in_block_rate: 10.0,
            cross_block_rate: 1.0,
            volume: 50_000,
            activity_exponent: 1.5,
            seed: RngSeed(0),
        }
    }
}

impl SyntheticSpec {
    pub fn uniform(n_blocks: usize, block_size: usize) -> Self {
        SyntheticSpec {
            block_sizes: vec![block_size; n_blocks],
            ..Default::default()
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = RngSeed(seed);
        self
    }

    pub fn n_nodes(&self) -> usize {
        self.block_sizes.iter().sum()
    }

    pub fn n_blocks(&self) -> usize {
        self.block_sizes.len()
    }

    pub fn validate(&self) -> Result<()> {
        if self.block_sizes.is_empty() || self.block_sizes.contains(&0) {
            return Err(Error::Config("every block needs at least one node".into()));
        }
        if self.n_nodes() < 2 {
            return Err(Error::Config(
                "a planted matrix needs at least two nodes".into(),
            ));
        }
        for (name, v) in [
            ("in-block rate", self.in_block_rate),
            ("cross-block rate", self.cross_block_rate),
            ("activity exponent", self.activity_exponent),
        ] {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::Config(format!(
                    "{name} must be finite and >= 0, got {v}"
                )));
            }
        }
        if self.volume == 0 {
            return Err(Error::Config("citation volume must be positive".into()));
        }
        if self.in_block_rate == 0.0 && (self.cross_block_rate == 0.0 || self.n_blocks() == 1) {
            return Err(Error::Config(
                "rates leave no cell with positive weight".into(),
            ));
        }
        Ok(())
    }

    /// The planted block of every node.
    pub fn planted_partition(&self) -> Partition {
        let labels: Vec<usize> = self
            .block_sizes
            .iter()
            .enumerate()
            .flat_map(|(b, &size)| std::iter::repeat_n(b, size))
            .collect();
        Partition::from_labels(&labels)
    }

    fn activities(&self) -> Vec<f64> {
        self.block_sizes
            .iter()
            .flat_map(|&size| (1..=size).map(|rank| (rank as f64).powf(-self.activity_exponent)))
            .collect()
    }
}

/// Draws a planted citation matrix and returns it with its ground truth.
pub fn generate_planted_citation_matrix(
    spec: &SyntheticSpec,
) -> Result<(CitationMatrix, Partition)> {
    spec.validate()?;
    let truth = spec.planted_partition();
    let activity = spec.activities();
    let n = spec.n_nodes();

    let weight = |i: usize, j: usize| -> f64 {
        if i == j {
            return 0.0;
        }
        let rate = if truth.label(i) == truth.label(j) {
            spec.in_block_rate
        } else {
            spec.cross_block_rate
        };
        activity[i] * rate
    };

    // Suffix sums of cell weights in row-major order, so each conditional
    // binomial probability is a ratio of exact-ish sums rather than a running
    // difference.
    let weights: Vec<f64> = (0..n * n).map(|c| weight(c / n, c % n)).collect();
    let mut suffix = vec![0.0; n * n + 1];
    for c in (0..n * n).rev() {
        suffix[c] = suffix[c + 1] + weights[c];
    }
    if suffix[0] <= 0.0 {
        return Err(Error::Config(
            "rates leave no cell with positive weight".into(),
        ));
    }

    // Multinomial via sequential conditional binomials.
    let mut rng = stream_rng(spec.seed, Purpose::Synthetic, 0);
    let mut m = CitationMatrix::new(n);
    let mut remaining = spec.volume;
    for c in 0..n * n {
        if remaining == 0 {
            break;
        }
        let w = weights[c];
        if w == 0.0 {
            continue;
        }
        let p = (w / suffix[c]).min(1.0);
        let k = if p >= 1.0 {
            remaining
        } else {
            Binomial::new(remaining, p)
                .map_err(|e| Error::Config(format!("binomial draw failed: {e}")))?
                .sample(&mut rng)
        };
        if k > 0 {
            m.add(c / n, c % n, k)?;
            remaining -= k;
        }
    }
    Ok((m, truth))
}
