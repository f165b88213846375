//! Two-level community detection by most similar node pairs.
//!
//! Every node of a weighted citation network is paired with the node(s) whose
//! normalized citation pattern is most similar to its own. Consuming those
//! pairs in order of decreasing similarity grows *core-communities*; pairs
//! that bridge two existing cores (*tides*) join them into
//! *real-communities*.
//!
//! The pipeline, one module per stage:
//!
//! * [`similarity`]: citation counts, row normalization, cosine similarity.
//! * [`selection`]: the pair-selection strategies (MAX, PSIM, P, top-n PSIM,
//!   MAX under deletion, and MAX/random mixtures).
//! * [`community`]: core/real community construction, partitions and
//!   coarse-graining.
//! * [`metrics`]: entropy, NMI and result summaries.
//! * [`sweep`] and [`synthetic`]: reproducible parameter sweeps and planted
//!   test networks.
//!
//! ```
//! use simpair::prelude::*;
//!
//! let m = CitationMatrix::from_dense(&[
//!     vec![3, 5, 0, 0],
//!     vec![4, 2, 0, 0],
//!     vec![0, 0, 1, 6],
//!     vec![0, 0, 5, 2],
//! ]).unwrap();
//! let s = build_similarity_matrix(&m);
//! let pairs = select_max(&s, None);
//! let result = build_communities(&pairs, m.n_nodes()).unwrap();
//! // 0 and 1 cite the same journals, as do 2 and 3
//! assert_eq!(extract_partition(&result, Level::Real).labels(), &[0, 0, 1, 1]);
//! ```

pub mod cli;
pub mod community;
pub mod error;
pub mod io;
pub mod metrics;
pub mod seed;
pub mod selection;
pub mod similarity;
pub mod sweep;
pub mod synthetic;

pub use error::{Error, Result};

pub mod prelude {
    pub use crate::community::{
        build_communities, extract_partition, renormalize, DetectionResult, Level, Partition,
        Provenance, TideCount,
    };
    pub use crate::error::{Error, Result};
    pub use crate::metrics::{entropy, joint_entropy, nmi, partition_stats};
    pub use crate::seed::RngSeed;
    pub use crate::selection::{
        apply_random_deletion, select_max, select_mixed, select_psim, select_random, RandomKind,
        RankedPair, RankedPairList, SelectionStrategy,
    };
    pub use crate::similarity::{
        build_similarity_matrix, cosine_similarity, normalize_rows, CitationMatrix, NodeId,
        SimilarityMatrix,
    };
    pub use crate::sweep::{ExperimentConfig, InputSource, ReferenceSource, SweepResult};
    pub use crate::synthetic::{generate_planted_citation_matrix, SyntheticSpec};
}
