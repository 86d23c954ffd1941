//! Pairwise max-flow min-cut refinement of a k-way partition.
//!
//! For a pair of adjacent blocks a corridor B around their cut is grown by
//! BFS, the flow problem on H_B is solved and the resulting bipartition is
//! applied if it improves the partition. The corridor size is scaled by an
//! adaptive factor α: doubled (up to α′) after a success, halved after a
//! failure, until α drops below one. Pairs are scheduled by active blocks.

use alloc::vec;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::hypergraph::{Hypergraph, VertexId, Weight};
use crate::maxflow::max_flow;
use crate::mincut::{build_pq_dag, extract_bipartition, most_balanced_min_cut};
use crate::network::NetworkVariant;
use crate::partition::{balanced_weight, Partition};
use crate::problem::{FlowModel, FlowProblem};
use crate::quotient::QuotientGraph;
use crate::subhypergraph::induced_subhypergraph;
use crate::{Clock, NoClock};

#[derive(Debug, Clone, PartialEq)]
pub struct RefinerConfig {
    /// Upper bound α′ of the corridor scaling factor; a power of two.
    pub alpha_prime: u32,
    pub model: FlowModel,
    pub variant: NetworkVariant,
    /// One-bridging-node modeling of single-pin border nets (F_H).
    pub single_pin_modeling: bool,
    pub most_balanced: bool,
    pub mbmc_reps: usize,
    pub s1: bool,
    pub s2: bool,
    pub s3: bool,
    pub s2_threshold: Weight,
    /// Ceiling on scheduling rounds per call of [`refine_kway`].
    pub max_rounds: usize,
}

impl Default for RefinerConfig {
    fn default() -> Self {
        Self {
            alpha_prime: 16,
            model: FlowModel::Hypergraph,
            variant: NetworkVariant::Reduced,
            single_pin_modeling: true,
            most_balanced: true,
            mbmc_reps: 8,
            s1: true,
            s2: true,
            s3: true,
            s2_threshold: 10,
            max_rounds: 1000,
        }
    }
}

impl RefinerConfig {
    pub fn validate(&self) -> Result<()> {
        if self.alpha_prime == 0 || !self.alpha_prime.is_power_of_two() {
            return Err(Error::Config("alpha_prime must be a power of two"));
        }
        if self.mbmc_reps == 0 {
            return Err(Error::Config("mbmc_reps must be at least 1"));
        }
        if self.max_rounds == 0 {
            return Err(Error::Config("max_rounds must be at least 1"));
        }
        Ok(())
    }
}

/// Counters collected during refinement.
#[derive(Debug, Default, Clone, PartialEq, Eq)]
pub struct RefineStats {
    pub flow_calls: u64,
    pub flow_nanos: u64,
    pub pair_calls: u64,
    pub improvements: u64,
    pub rounds: u64,
    pub skipped_s1: u64,
    pub skipped_s2: u64,
    pub s3_stops: u64,
    /// Rounds cut short by `max_rounds`.
    pub ceiling_hits: u64,
    /// Accepted states that broke monotonicity, or cuts that disagreed with the flow value.
    pub violations: u64,
}

impl RefineStats {
    pub fn merge(&mut self, other: &RefineStats) {
        self.flow_calls += other.flow_calls;
        self.flow_nanos += other.flow_nanos;
        self.pair_calls += other.pair_calls;
        self.improvements += other.improvements;
        self.rounds += other.rounds;
        self.skipped_s1 += other.skipped_s1;
        self.skipped_s2 += other.skipped_s2;
        self.s3_stops += other.s3_stops;
        self.ceiling_hits += other.ceiling_hits;
        self.violations += other.violations;
    }
}

/// Which block pairs ever improved; kept across the levels of one run.
#[derive(Debug, Clone)]
pub struct PairHistory {
    k: usize,
    improved: Vec<bool>,
}

impl PairHistory {
    pub fn new(k: usize) -> Self {
        Self { k, improved: vec![false; k * k] }
    }

    pub fn mark(&mut self, i: usize, j: usize) {
        self.improved[i * self.k + j] = true;
        self.improved[j * self.k + i] = true;
    }

    pub fn improved(&self, i: usize, j: usize) -> bool {
        self.improved[i * self.k + j]
    }
}

/// State shared by all refinement calls of one partitioning run.
#[derive(Debug, Clone)]
pub struct RefineState {
    pub history: PairHistory,
    pub stats: RefineStats,
    invocations: usize,
}

impl RefineState {
    pub fn new(k: usize) -> Self {
        Self { history: PairHistory::new(k), stats: RefineStats::default(), invocations: 0 }
    }

    pub fn invocations(&self) -> usize {
        self.invocations
    }
}

/// Vertex set B = B1 ∪ B2 around the cut of a block pair.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Corridor {
    pub vertices: Vec<VertexId>,
    pub first_weight: Weight,
    pub second_weight: Weight,
}

impl Corridor {
    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }
}

/// Weight budget of the side grown inside `own` when `other` is the
/// opposite block: (1+ε′)·⌈(c(V_i)+c(V_j))/2⌉ − c(other).
pub fn corridor_bound(own: Weight, other: Weight, eps_prime: f64) -> Weight {
    let half = balanced_weight(own + other, 2) as f64;
    // non-negative, so truncation is floor
    let bound = ((1.0 + eps_prime) * half + 1e-9) as Weight;
    bound.saturating_sub(other)
}

/// Grows B1 ⊆ V_i and B2 ⊆ V_j by BFS from the vertices of cut nets of the
/// pair. Vertices that do not fit the budget are skipped, not expanded.
pub fn compute_corridor<R: Rng + ?Sized>(
    h: &Hypergraph,
    part: &Partition,
    i: usize,
    j: usize,
    eps_prime: f64,
    rng: &mut R,
) -> Corridor {
    let (wi, wj) = (part.block_weight(i), part.block_weight(j));
    let mut seeds_i = Vec::new();
    let mut seeds_j = Vec::new();
    let mut seeded = vec![false; h.num_vertices()];
    for e in 0..h.num_nets() {
        if part.pin_count(e, i) > 0 && part.pin_count(e, j) > 0 {
            for &v in h.pins(e) {
                let b = part.block(v);
                if !seeded[v] && (b == i || b == j) {
                    seeded[v] = true;
                    if b == i {
                        seeds_i.push(v);
                    } else {
                        seeds_j.push(v);
                    }
                }
            }
        }
    }
    let mut vertices = Vec::new();
    let first_weight = grow(h, part, i, seeds_i, corridor_bound(wi, wj, eps_prime), rng, &mut vertices);
    let second_weight = grow(h, part, j, seeds_j, corridor_bound(wj, wi, eps_prime), rng, &mut vertices);
    Corridor { vertices, first_weight, second_weight }
}

fn grow<R: Rng + ?Sized>(
    h: &Hypergraph,
    part: &Partition,
    block: usize,
    mut level: Vec<VertexId>,
    budget: Weight,
    rng: &mut R,
    out: &mut Vec<VertexId>,
) -> Weight {
    let mut used = 0;
    if budget == 0 {
        return 0;
    }
    let mut seen = vec![false; h.num_vertices()];
    let mut net_seen = vec![false; h.num_nets()];
    for &v in &level {
        seen[v] = true;
    }
    while !level.is_empty() && used < budget {
        level.shuffle(rng);
        let mut next = Vec::new();
        for &v in &level {
            let w = h.vertex_weight(v);
            if used + w > budget {
                continue;
            }
            used += w;
            out.push(v);
            for &e in h.nets_of(v) {
                if net_seen[e] {
                    continue;
                }
                net_seen[e] = true;
                for &u in h.pins(e) {
                    if !seen[u] && part.block(u) == block {
                        seen[u] = true;
                        next.push(u);
                    }
                }
            }
        }
        level = next;
    }
    used
}

/// α schedule: min(2α, α′) after an accepted iteration, α/2 otherwise.
pub fn next_alpha(alpha: u32, accepted: bool, alpha_prime: u32) -> u32 {
    if accepted {
        (2 * alpha).min(alpha_prime)
    } else {
        alpha / 2
    }
}

/// Result of refining one block pair.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PairOutcome {
    pub improved: bool,
    /// α used by each flow iteration, in order.
    pub alphas: Vec<u32>,
}

/// Adaptive flow iterations on blocks (i, j). Applies the best accepted
/// bipartition to `part`.
///
/// A candidate is accepted iff it does not empty a block, does not increase
/// km1, and either lowers km1 while respecting the balance constraint or
/// lowers the maximum block weight.
#[allow(clippy::too_many_arguments)]
pub fn refine_pair<R: Rng + ?Sized>(
    h: &Hypergraph,
    part: &mut Partition,
    i: usize,
    j: usize,
    cfg: &RefinerConfig,
    rng: &mut R,
    clock: &dyn Clock,
    stats: &mut RefineStats,
) -> PairOutcome {
    stats.pair_calls += 1;
    let allowed = part.max_allowed_weight();
    let eps = part.epsilon();
    let mut best_km1 = part.km1();
    let mut best_max = part.max_weight();
    let mut outcome = PairOutcome::default();
    let mut alpha = cfg.alpha_prime;
    let mut moves: Vec<(VertexId, usize)> = Vec::new();

    while alpha >= 1 {
        outcome.alphas.push(alpha);
        let corridor = compute_corridor(h, part, i, j, alpha as f64 * eps, rng);
        if corridor.is_empty() {
            break;
        }
        let sub = match induced_subhypergraph(h, part, &corridor.vertices, i, j) {
            Ok(sub) => sub,
            Err(_) => {
                stats.violations += 1;
                break;
            }
        };
        let problem = match FlowProblem::build(&sub, cfg.model, cfg.variant, cfg.single_pin_modeling) {
            Ok(p) => p,
            Err(_) => {
                stats.violations += 1;
                break;
            }
        };
        let current = problem.local_cut(&problem.current_assignment());
        let start = clock.now_nanos();
        let flow = max_flow(&problem);
        stats.flow_nanos += clock.now_nanos().saturating_sub(start);
        stats.flow_calls += 1;
        let flow = match flow {
            Ok(f) => f,
            Err(_) => {
                stats.violations += 1;
                break;
            }
        };
        if cfg.s3 && flow.value() >= current {
            stats.s3_stops += 1;
            break;
        }

        let side = if cfg.most_balanced {
            let start = clock.now_nanos();
            let dag = build_pq_dag(&flow);
            let side = most_balanced_min_cut(&dag, &problem, &flow, part, cfg.mbmc_reps, rng);
            stats.flow_nanos += clock.now_nanos().saturating_sub(start);
            side
        } else {
            extract_bipartition(&problem, &flow)
        };
        if problem.local_cut(&side) != flow.value() || !problem.respects_forced(&side) {
            stats.violations += 1;
            alpha = next_alpha(alpha, false, cfg.alpha_prime);
            continue;
        }

        moves.clear();
        for (v, &src) in side.iter().enumerate() {
            let pv = sub.parent_vertex(v);
            let target = if src { i } else { j };
            let from = part.block(pv);
            if from != target {
                moves.push((pv, from));
                part.move_vertex(h, pv, target);
            }
        }
        let km1 = part.km1();
        let max = part.max_weight();
        let accepted = !moves.is_empty()
            && !part.has_empty_block()
            && km1 <= best_km1
            && ((km1 < best_km1 && max <= allowed) || max < best_max);
        if accepted {
            best_km1 = km1;
            best_max = max;
            outcome.improved = true;
        } else {
            for &(v, from) in moves.iter().rev() {
                part.move_vertex(h, v, from);
            }
        }
        alpha = next_alpha(alpha, accepted, cfg.alpha_prime);
    }
    outcome
}

/// Flat refinement of the whole partition with fresh state.
pub fn refine_kway<R: Rng + ?Sized>(
    h: &Hypergraph,
    part: &mut Partition,
    cfg: &RefinerConfig,
    rng: &mut R,
) -> RefineStats {
    let mut state = RefineState::new(part.k());
    refine_kway_with(h, part, cfg, &mut state, true, rng, &NoClock);
    state.stats
}

/// Active block scheduling over the quotient graph. `finest` marks the
/// input level, where S2 does not apply. Returns whether `part` changed.
pub fn refine_kway_with<R: Rng + ?Sized>(
    h: &Hypergraph,
    part: &mut Partition,
    cfg: &RefinerConfig,
    state: &mut RefineState,
    finest: bool,
    rng: &mut R,
    clock: &dyn Clock,
) -> bool {
    let k = part.k();
    let invocation = state.invocations;
    state.invocations += 1;
    let mut active = vec![true; k];
    let mut changed = false;
    let mut round = 0;
    while active.iter().any(|&a| a) {
        if round >= cfg.max_rounds {
            state.stats.ceiling_hits += 1;
            break;
        }
        state.stats.rounds += 1;
        let q = QuotientGraph::new(h, part);
        let mut next = vec![false; k];
        for (i, j) in q.edges() {
            if !active[i] && !active[j] {
                continue;
            }
            if cfg.s1 && invocation >= 1 && round >= 1 && !state.history.improved(i, j) {
                state.stats.skipped_s1 += 1;
                continue;
            }
            if cfg.s2 && !finest && q.pair_cut_weight(i, j) < cfg.s2_threshold {
                state.stats.skipped_s2 += 1;
                continue;
            }
            let before = (part.km1(), part.max_weight());
            let was_balanced = part.is_balanced();
            let out = refine_pair(h, part, i, j, cfg, rng, clock, &mut state.stats);
            if out.improved {
                let after = (part.km1(), part.max_weight());
                if after.0 > before.0 || (was_balanced && !part.is_balanced()) {
                    state.stats.violations += 1;
                }
                state.stats.improvements += 1;
                state.history.mark(i, j);
                next[i] = true;
                next[j] = true;
                changed = true;
            }
        }
        active = next;
        round += 1;
    }
    changed
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergraph::tests::h0;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn corridor_bound_arithmetic() {
        assert_eq!(corridor_bound(2, 2, 0.5), 1);
        assert_eq!(corridor_bound(2, 2, 0.0), 0);
        assert_eq!(corridor_bound(5, 3, 0.25), 2);
        assert_eq!(corridor_bound(2, 2, 100.0), 200);
    }

    #[test]
    fn h0_corridor_sizes() {
        let h = h0();
        let p = Partition::new(&h, 2, 0.5, vec![0, 0, 1, 1]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let c = compute_corridor(&h, &p, 0, 1, 0.5, &mut rng);
        assert_eq!((c.first_weight, c.second_weight), (1, 1));
        assert_eq!(c.vertices.len(), 2);
        assert!(compute_corridor(&h, &p, 0, 1, 0.0, &mut rng).is_empty());
        let mut all = compute_corridor(&h, &p, 0, 1, 50.0, &mut rng).vertices;
        all.sort_unstable();
        assert_eq!(all, vec![0, 1, 2, 3]);
    }

    #[test]
    fn alpha_schedule() {
        assert_eq!(next_alpha(16, true, 16), 16);
        assert_eq!(next_alpha(4, true, 16), 8);
        let mut a = 16;
        let mut seq = Vec::new();
        while a >= 1 {
            seq.push(a);
            a = next_alpha(a, false, 16);
        }
        assert_eq!(seq, vec![16, 8, 4, 2, 1]);
    }

    #[test]
    fn all_rejected_runs_full_halving() {
        // a single cut net inside a whole-pair corridor offers nothing
        let h = Hypergraph::new(2, &[vec![0, 1]]).unwrap();
        let mut p = Partition::new(&h, 2, 0.5, vec![0, 1]).unwrap();
        let cfg = RefinerConfig { s3: false, ..RefinerConfig::default() };
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let mut stats = RefineStats::default();
        let out = refine_pair(&h, &mut p, 0, 1, &cfg, &mut rng, &NoClock, &mut stats);
        assert!(!out.improved);
        assert_eq!(out.alphas, vec![16, 8, 4, 2, 1]);
        assert_eq!(p.blocks(), &[0, 1]);
    }

    #[test]
    fn h0_pair_refinement_reaches_one() {
        let h = h0();
        let mut reached = false;
        for seed in 0..16 {
            let mut p = Partition::new(&h, 2, 0.5, vec![0, 0, 1, 1]).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let stats = refine_kway(&h, &mut p, &RefinerConfig::default(), &mut rng);
            assert!(p.km1() <= 2);
            assert!(p.is_balanced());
            assert_eq!(stats.violations, 0);
            reached |= p.km1() == 1;
        }
        assert!(reached);
    }

    #[test]
    fn optimal_partition_is_a_fixed_point() {
        let h = h0();
        let mut p = Partition::new(&h, 2, 0.5, vec![0, 0, 0, 1]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let stats = refine_kway(&h, &mut p, &RefinerConfig::default(), &mut rng);
        assert_eq!(p.blocks(), &[0, 0, 0, 1]);
        assert_eq!(stats.rounds, 1);
        assert_eq!(stats.improvements, 0);
    }

    #[test]
    fn config_validation() {
        assert!(RefinerConfig::default().validate().is_ok());
        assert!(RefinerConfig { alpha_prime: 12, ..Default::default() }.validate().is_err());
        assert!(RefinerConfig { mbmc_reps: 0, ..Default::default() }.validate().is_err());
    }
}
