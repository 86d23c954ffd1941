//! Max-flow min-cut refinement for k-way hypergraph partitions.
//!
//! The crate is `no_std` and only needs `alloc`. It contains:
//!
//! - [`Hypergraph`], [`Partition`] and the (λ−1)/cut objectives,
//! - corridor-induced [`SubHypergraph`]s and the [`QuotientGraph`],
//! - the Lawler, Liu-Wong and low-degree-reduced flow networks ([`network`]),
//! - flow problems for the graph-style and hypergraph-style terminal models ([`problem`]),
//! - an exact blocking-flow max-flow solver ([`maxflow`]),
//! - min-cut reconstruction and most balanced minimum cuts ([`mincut`]),
//! - adaptive pairwise flow refinement with active block scheduling ([`refine`]),
//! - a small multilevel partitioner to host the refinement ([`multilevel`]),
//! - brute-force reference solvers for small inputs ([`oracle`], feature `oracle`).
//!
//! Everything that touches files, clocks or the command line lives in the
//! `hyperflow` crate.
#![no_std]

extern crate alloc;

pub mod error;
pub mod hypergraph;
pub mod maxflow;
pub mod mincut;
pub mod multilevel;
pub mod network;
#[cfg(feature = "oracle")]
pub mod oracle;
pub mod partition;
pub mod problem;
pub mod quotient;
pub mod refine;
pub mod subhypergraph;

pub use error::{Error, Result};
pub use hypergraph::{Hypergraph, NetId, VertexId, Weight};
pub use maxflow::{max_flow, FlowState};
pub use mincut::{build_pq_dag, extract_bipartition, most_balanced_min_cut, PqDag};
pub use multilevel::{partition, PartitionOutcome, PartitionerConfig};
pub use network::{FlowNetwork, NetworkStats, NetworkVariant};
pub use partition::Partition;
pub use problem::{FlowModel, FlowProblem};
pub use quotient::QuotientGraph;
pub use refine::{refine_kway, refine_pair, RefineStats, RefinerConfig};
pub use subhypergraph::{NetClass, SubHypergraph};

/// Monotonic time source used to attribute running time to flow refinement.
///
/// The core never reads a clock itself; callers with `std` pass one in.
pub trait Clock {
    fn now_nanos(&self) -> u64;
}

/// A clock that always reads zero.
#[derive(Debug, Default, Clone, Copy)]
pub struct NoClock;

impl Clock for NoClock {
    fn now_nanos(&self) -> u64 {
        0
    }
}
