//! Seeds and per-node random streams.
//!
//! Every randomized step draws from a ChaCha8 generator keyed by
//! `splitmix64(seed ^ purpose_tag)` with the node index as the ChaCha stream
//! id. Nodes therefore never share a stream, and results do not depend on the
//! order (or thread) in which nodes are visited.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RngSeed(pub u64);

impl From<u64> for RngSeed {
    fn from(v: u64) -> Self {
        RngSeed(v)
    }
}

/// What a random stream is used for. Distinct purposes get independent keys.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub(crate) enum Purpose {
    /// Partner sampling (PSIM and P).
    Sample,
    /// The MAX-vs-random coin of the mixed strategy.
    Mixture,
    /// Per-row similarity deletion.
    Deletion,
    /// Synthetic matrix generation.
    Synthetic,
}

impl Purpose {
    fn tag(self) -> u64 {
        match self {
            Purpose::Sample => 0x5341_4d50_4c45_0001,
            Purpose::Mixture => 0x4d49_5854_5552_0002,
            Purpose::Deletion => 0x4445_4c45_5445_0003,
            Purpose::Synthetic => 0x5359_4e54_4845_0004,
        }
    }
}

/// SplitMix64 finalizer (Steele, Lea & Flood, 2014).
pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

pub(crate) fn stream_rng(seed: RngSeed, purpose: Purpose, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(splitmix64(seed.0 ^ purpose.tag()));
    rng.set_stream(stream);
    rng
}

/// Seed for repetition `rep` at grid point `grid`:
/// `splitmix64(splitmix64(base ^ splitmix64(grid)) ^ rep)`.
///
/// This formula is part of the output format of the sweeps; changing it
/// changes every published `sweep.csv`.
pub fn derive_seed(base: RngSeed, grid: u64, rep: u64) -> RngSeed {
    RngSeed(splitmix64(splitmix64(base.0 ^ splitmix64(grid)) ^ rep))
}
