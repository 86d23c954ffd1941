//! Exhaustive reference solvers for small instances.
//!
//! Each oracle refuses inputs above its size bound instead of running
//! unbounded. None of them share code with the production path beyond the
//! hypergraph and network containers.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::hypergraph::{Hypergraph, VertexId, Weight};
use crate::network::{FlowNetwork, NetworkStats, NetworkVariant, NodeId};
use crate::partition::max_block_weight;
use crate::subhypergraph::SubHypergraph;

pub const MAX_ST_CUT_VERTICES: usize = 20;
pub const MAX_PARTITION_ASSIGNMENTS: u64 = 20_000_000;
pub const MAX_FREE_NETWORK_NODES: usize = 16;

fn cut_weight(h: &Hypergraph, side: impl Fn(VertexId) -> bool) -> Weight {
    h.nets()
        .enumerate()
        .filter(|(_, pins)| {
            let first = side(pins[0]);
            pins.iter().any(|&v| side(v) != first)
        })
        .map(|(e, _)| h.net_weight(e))
        .sum()
}

/// Minimum weight of nets separating `s` from `t`, with a witness
/// (source-side flag per vertex).
pub fn brute_min_st_cut(h: &Hypergraph, s: VertexId, t: VertexId) -> Result<(Weight, Vec<bool>)> {
    let n = h.num_vertices();
    if n > MAX_ST_CUT_VERTICES {
        return Err(Error::TooLarge { what: "vertices for brute_min_st_cut" });
    }
    if s >= n {
        return Err(Error::InvalidVertex(s));
    }
    if t >= n {
        return Err(Error::InvalidVertex(t));
    }
    if s == t {
        return Err(Error::SourceSinkOverlap(s));
    }
    let free: Vec<VertexId> = (0..n).filter(|&v| v != s && v != t).collect();
    let mut best: Option<(Weight, u32)> = None;
    for mask in 0u32..(1u32 << free.len()) {
        let mut side = vec![false; n];
        side[s] = true;
        for (bit, &v) in free.iter().enumerate() {
            side[v] = mask >> bit & 1 == 1;
        }
        let w = cut_weight(h, |v| side[v]);
        if best.is_none_or(|(b, _)| w < b) {
            best = Some((w, mask));
        }
    }
    let (w, mask) = best.expect("at least one assignment");
    let mut side = vec![false; n];
    side[s] = true;
    for (bit, &v) in free.iter().enumerate() {
        side[v] = mask >> bit & 1 == 1;
    }
    Ok((w, side))
}

/// Minimum km1 over all partitions into `k` non-empty blocks with every
/// block weight ≤ (1+ε)⌈c(V)/k⌉; `None` when no such partition exists.
pub fn brute_best_partition(h: &Hypergraph, k: usize, epsilon: f64) -> Result<Option<(Weight, Vec<usize>)>> {
    if k == 0 {
        return Err(Error::ZeroBlocks);
    }
    let n = h.num_vertices();
    let mut count: u64 = 1;
    for _ in 0..n {
        count = count.saturating_mul(k as u64);
        if count > MAX_PARTITION_ASSIGNMENTS {
            return Err(Error::TooLarge { what: "assignments for brute_best_partition" });
        }
    }
    let allowed = max_block_weight(h.total_weight(), k, epsilon);
    let mut blocks = vec![0usize; n];
    let mut best: Option<(Weight, Vec<usize>)> = None;
    let mut weights = vec![0 as Weight; k];
    let mut sizes = vec![0usize; k];
    let mut spans = vec![0u64; 0];
    for _ in 0..count {
        weights.iter_mut().for_each(|w| *w = 0);
        sizes.iter_mut().for_each(|s| *s = 0);
        for v in 0..n {
            weights[blocks[v]] += h.vertex_weight(v);
            sizes[blocks[v]] += 1;
        }
        if weights.iter().all(|&w| w <= allowed) && sizes.iter().all(|&s| s > 0) {
            let mut km1 = 0;
            for (e, pins) in h.nets().enumerate() {
                spans.clear();
                spans.extend(pins.iter().map(|&v| blocks[v] as u64));
                spans.sort_unstable();
                spans.dedup();
                km1 += (spans.len() as Weight - 1) * h.net_weight(e);
            }
            if best.as_ref().is_none_or(|(b, _)| km1 < *b) {
                best = Some((km1, blocks.clone()));
            }
        }
        // next assignment in base k
        for b in blocks.iter_mut() {
            *b += 1;
            if *b < k {
                break;
            }
            *b = 0;
        }
    }
    Ok(best)
}

/// All node sets containing `sources` and excluding `sinks` whose crossing
/// capacity is minimum, with that capacity. Sets are given as membership
/// flags over all network nodes.
pub fn enumerate_network_min_cuts(
    network: &FlowNetwork,
    sources: &[NodeId],
    sinks: &[NodeId],
) -> Result<Vec<(Vec<bool>, Weight)>> {
    let n = network.num_nodes();
    let mut fixed = vec![None; n];
    for &s in sources {
        fixed[s] = Some(true);
    }
    for &t in sinks {
        if fixed[t] == Some(true) {
            return Err(Error::SourceSinkOverlap(t));
        }
        fixed[t] = Some(false);
    }
    let free: Vec<NodeId> = (0..n).filter(|&u| fixed[u].is_none()).collect();
    if free.len() > MAX_FREE_NETWORK_NODES {
        return Err(Error::TooLarge { what: "free nodes for enumerate_network_min_cuts" });
    }
    let mut best: Option<Weight> = None;
    let mut cuts = Vec::new();
    for mask in 0u32..(1u32 << free.len()) {
        let mut inside: Vec<bool> = fixed.iter().map(|f| f.unwrap_or(false)).collect();
        for (bit, &u) in free.iter().enumerate() {
            inside[u] = mask >> bit & 1 == 1;
        }
        let mut capacity: Option<Weight> = Some(0);
        for a in network.arcs() {
            if inside[a.from] && !inside[a.to] {
                capacity = match (capacity, a.capacity) {
                    (Some(c), crate::network::Capacity::Finite(w)) => Some(c + w),
                    _ => None,
                };
            }
        }
        let Some(c) = capacity else { continue };
        match best {
            Some(b) if c > b => {}
            Some(b) if c == b => cuts.push(inside),
            _ => {
                best = Some(c);
                cuts.clear();
                cuts.push(inside);
            }
        }
    }
    let value = best.unwrap_or(0);
    Ok(cuts.into_iter().map(|c| (c, value)).collect())
}

/// Node and arc counts of the plain networks on H_B from closed-form
/// formulas over net sizes and vertex degrees.
pub fn counting_oracle(sub: &SubHypergraph, variant: NetworkVariant) -> NetworkStats {
    let h = sub.hypergraph();
    let n = h.num_vertices();
    let sizes: Vec<usize> = (0..h.num_nets()).map(|e| h.net_size(e)).collect();
    let p: usize = sizes.iter().sum();
    let m = sizes.len();
    match variant {
        NetworkVariant::Lawler => NetworkStats {
            num_nodes: n + 2 * m,
            num_arcs: m + 2 * p,
            num_infinite_arcs: 2 * p,
        },
        NetworkVariant::LiuWong | NetworkVariant::Reduced => {
            let m2 = sizes.iter().filter(|&&s| s == 2).count();
            let m3 = sizes.iter().filter(|&&s| s >= 3).count();
            let p3: usize = sizes.iter().filter(|&&s| s >= 3).sum();
            let mut stats = NetworkStats {
                num_nodes: n + 2 * m3,
                num_arcs: 2 * m2 + m3 + 2 * p3,
                num_infinite_arcs: 2 * p3,
            };
            if variant == NetworkVariant::Reduced {
                for v in 0..n {
                    let nets = h.nets_of(v);
                    if nets.iter().any(|&e| sizes[e] == 2) {
                        continue;
                    }
                    let d = nets.iter().filter(|&&e| sizes[e] >= 3).count();
                    if (1..=3).contains(&d) {
                        stats.num_nodes -= 1;
                        stats.num_arcs = stats.num_arcs - 2 * d + d * (d - 1);
                        stats.num_infinite_arcs = stats.num_infinite_arcs - 2 * d + d * (d - 1);
                    }
                }
            }
            stats
        }
    }
}
