//! Multilevel partitioner hosting the flow refinement: heavy-edge
//! coarsening, portfolio initial partitioning, then per level flow
//! refinement followed by FM while projecting back to the input.

pub mod coarsen;
pub mod fm;
pub mod initial;

use rand::Rng;

use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;
use crate::partition::{balanced_weight, Partition};
use crate::refine::{refine_kway_with, RefineState, RefineStats, RefinerConfig};
use crate::Clock;

pub use coarsen::{coarsen, contract, Hierarchy, Level};
pub use fm::{fm_pass, fm_refine, rebalance};
pub use initial::initial_partition;

#[derive(Debug, Clone, PartialEq)]
pub struct PartitionerConfig {
    /// +F: flow refinement on every level.
    pub flows: bool,
    /// +FM: FM local search on every level.
    pub fm: bool,
    /// Flow settings; `refiner.most_balanced` is the +M flag.
    pub refiner: RefinerConfig,
    /// Stop coarsening at this many vertices; `None` means max(2k, 160).
    pub coarsening_target: Option<usize>,
    pub initial_attempts: usize,
    pub fm_passes: usize,
    /// Run flows only on this many of the finest levels.
    pub flow_levels: Option<usize>,
}

impl Default for PartitionerConfig {
    fn default() -> Self {
        Self {
            flows: true,
            fm: true,
            refiner: RefinerConfig::default(),
            coarsening_target: None,
            initial_attempts: 16,
            fm_passes: 10,
            flow_levels: None,
        }
    }
}

impl PartitionerConfig {
    pub fn validate(&self) -> Result<()> {
        self.refiner.validate()?;
        if self.initial_attempts == 0 {
            return Err(Error::Config("initial_attempts must be at least 1"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct PartitionOutcome {
    pub partition: Partition,
    /// The result violates the balance constraint.
    pub unachievable_balance: bool,
    pub levels: usize,
    pub stats: RefineStats,
}

/// Partitions `h` into `k` blocks minimizing km1 under imbalance `epsilon`.
pub fn partition<R: Rng + ?Sized>(
    h: &Hypergraph,
    k: usize,
    epsilon: f64,
    cfg: &PartitionerConfig,
    rng: &mut R,
    clock: &dyn Clock,
) -> Result<PartitionOutcome> {
    if k == 0 {
        return Err(Error::ZeroBlocks);
    }
    if !epsilon.is_finite() || epsilon < 0.0 {
        return Err(Error::Config("epsilon must be a finite non-negative number"));
    }
    cfg.validate()?;

    let target = cfg.coarsening_target.unwrap_or((2 * k).max(160));
    let cap = (2 * balanced_weight(h.total_weight(), target)).max(1);
    let hierarchy = coarsen(h, target, cap, rng);
    let depth = hierarchy.depth();

    let coarsest = hierarchy.coarsest(h);
    let mut part = initial_partition(coarsest, k, epsilon, cfg.initial_attempts, cfg.fm_passes, rng);
    let mut state = RefineState::new(k);
    let mut level = depth;
    loop {
        let hl = hierarchy.hypergraph(h, level);
        let flows_here = cfg.flows && cfg.flow_levels.is_none_or(|l| level < l);
        if flows_here && k > 1 {
            refine_kway_with(hl, &mut part, &cfg.refiner, &mut state, level == 0, rng, clock);
        }
        if cfg.fm {
            fm_refine(hl, &mut part, cfg.fm_passes, rng);
        }
        if level == 0 {
            break;
        }
        let blocks = hierarchy.project(level, part.blocks());
        part = Partition::new(hierarchy.hypergraph(h, level - 1), k, epsilon, blocks)?;
        level -= 1;
    }
    if !part.is_balanced() {
        rebalance(h, &mut part);
    }
    Ok(PartitionOutcome {
        unachievable_balance: !part.is_balanced(),
        partition: part,
        levels: depth + 1,
        stats: state.stats,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergraph::tests::h0;
    use crate::partition::{cut_metric, km1_metric};
    use crate::NoClock;
    use alloc::vec;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn h0_defaults() {
        let h = h0();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let out = partition(&h, 2, 0.03, &PartitionerConfig::default(), &mut rng, &NoClock).unwrap();
        assert_eq!(out.partition.km1(), 2);
        assert!(!out.unachievable_balance);
        let out = partition(&h, 2, 0.5, &PartitionerConfig::default(), &mut rng, &NoClock).unwrap();
        assert_eq!(out.partition.km1(), 1);
    }

    #[test]
    fn heavy_vertex_is_unachievable() {
        let h = Hypergraph::with_weights(3, &[vec![0, 1], vec![1, 2]], None, Some(vec![3, 3, 3])).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let out = partition(&h, 2, 0.0, &PartitionerConfig::default(), &mut rng, &NoClock).unwrap();
        assert!(out.unachievable_balance);
    }

    #[test]
    fn graph_km1_equals_edge_cut() {
        let edges: alloc::vec::Vec<alloc::vec::Vec<usize>> =
            (0..300).map(|v| alloc::vec![v, (v * 7 + 3) % 300]).filter(|e| e[0] != e[1]).collect();
        let h = Hypergraph::new(300, &edges).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let out = partition(&h, 2, 0.03, &PartitionerConfig::default(), &mut rng, &NoClock).unwrap();
        assert!(out.levels > 1);
        assert!(out.partition.is_balanced());
        let blocks = out.partition.blocks();
        assert_eq!(km1_metric(&h, blocks), cut_metric(&h, blocks));
        assert_eq!(out.stats.violations, 0);
    }

    #[test]
    fn deterministic_per_seed() {
        let nets: alloc::vec::Vec<alloc::vec::Vec<usize>> =
            (0..200).map(|e| alloc::vec![e % 150, (e * 13 + 1) % 150, (e * 31 + 7) % 150]).collect();
        let nets: alloc::vec::Vec<_> = nets
            .into_iter()
            .map(|mut p| {
                p.sort_unstable();
                p.dedup();
                p
            })
            .collect();
        let h = Hypergraph::new(150, &nets).unwrap();
        let run = |seed| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            partition(&h, 4, 0.03, &PartitionerConfig::default(), &mut rng, &NoClock)
                .unwrap()
                .partition
                .into_blocks()
        };
        assert_eq!(run(9), run(9));
    }

    #[test]
    fn rejects_bad_arguments() {
        let h = h0();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert!(partition(&h, 0, 0.03, &PartitionerConfig::default(), &mut rng, &NoClock).is_err());
        assert!(partition(&h, 2, -1.0, &PartitionerConfig::default(), &mut rng, &NoClock).is_err());
    }
}
