//! Boundary k-way FM local search with rollback.

use alloc::collections::BinaryHeap;
use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;

use crate::hypergraph::{Hypergraph, VertexId};
use crate::partition::Partition;

/// Consecutive moves without a new best prefix that end a pass.
const STALL_LIMIT: usize = 200;
/// Nets larger than this do not trigger neighbour gain updates.
const UPDATE_NET_LIMIT: usize = 1000;

/// Best feasible move of `v`: target block and km1 gain. Targets are
/// blocks sharing a net with `v` that can take its weight; `v` never
/// leaves a block it is the last vertex of.
pub fn best_move(h: &Hypergraph, part: &Partition, v: VertexId) -> Option<(i64, usize)> {
    let from = part.block(v);
    if part.block_size(from) <= 1 {
        return None;
    }
    let allowed = part.max_allowed_weight();
    let w = h.vertex_weight(v);
    let mut best: Option<(i64, usize)> = None;
    let mut seen = vec![false; part.k()];
    seen[from] = true;
    for &e in h.nets_of(v) {
        if part.connectivity(e) < 2 && part.pin_count(e, from) > 0 {
            continue;
        }
        for b in 0..part.k() {
            if seen[b] || part.pin_count(e, b) == 0 {
                continue;
            }
            seen[b] = true;
            if part.block_weight(b) + w > allowed {
                continue;
            }
            let gain = part.km1_gain(h, v, b);
            if best.is_none_or(|(g, t)| gain > g || (gain == g && part.block_weight(b) < part.block_weight(t))) {
                best = Some((gain, b));
            }
        }
    }
    best
}

fn is_boundary(h: &Hypergraph, part: &Partition, v: VertexId) -> bool {
    h.nets_of(v).iter().any(|&e| part.connectivity(e) > 1)
}

/// One FM pass. Returns the km1 improvement kept after rollback.
pub fn fm_pass<R: Rng + ?Sized>(h: &Hypergraph, part: &mut Partition, rng: &mut R) -> u64 {
    let n = h.num_vertices();
    let mut heap: BinaryHeap<(i64, u32, VertexId, usize)> = BinaryHeap::new();
    for v in 0..n {
        if is_boundary(h, part, v) {
            if let Some((g, b)) = best_move(h, part, v) {
                heap.push((g, rng.gen(), v, b));
            }
        }
    }
    let mut locked = vec![false; n];
    let mut log: Vec<(VertexId, usize)> = Vec::new();
    let start = part.km1() as i64;
    let mut best_km1 = start;
    let mut best_max = part.max_weight();
    let mut best_len = 0;
    while let Some((gain, _, v, b)) = heap.pop() {
        if locked[v] {
            continue;
        }
        match best_move(h, part, v) {
            Some((g, t)) if g == gain && t == b => {}
            Some((g, t)) => {
                heap.push((g, rng.gen(), v, t));
                continue;
            }
            None => continue,
        }
        let from = part.block(v);
        part.move_vertex(h, v, b);
        locked[v] = true;
        log.push((v, from));
        let km1 = part.km1() as i64;
        let max = part.max_weight();
        if km1 < best_km1 || (km1 == best_km1 && max < best_max) {
            best_km1 = km1;
            best_max = max;
            best_len = log.len();
        } else if log.len() - best_len >= STALL_LIMIT {
            break;
        }
        for &e in h.nets_of(v) {
            if h.net_size(e) > UPDATE_NET_LIMIT {
                continue;
            }
            for &u in h.pins(e) {
                if !locked[u] {
                    if let Some((g, t)) = best_move(h, part, u) {
                        heap.push((g, rng.gen(), u, t));
                    }
                }
            }
        }
    }
    for &(v, from) in log[best_len..].iter().rev() {
        part.move_vertex(h, v, from);
    }
    (start - best_km1) as u64
}

/// FM passes until one does not improve km1, at most `max_passes`.
pub fn fm_refine<R: Rng + ?Sized>(h: &Hypergraph, part: &mut Partition, max_passes: usize, rng: &mut R) -> u64 {
    let mut total = 0;
    for _ in 0..max_passes {
        let before = (part.km1(), part.max_weight());
        let gained = fm_pass(h, part, rng);
        total += gained;
        if gained == 0 && part.max_weight() >= before.1 {
            break;
        }
    }
    total
}

/// Moves vertices out of overloaded blocks, best km1 gain first, into
/// blocks that can take them. Stops when balanced or stuck.
pub fn rebalance(h: &Hypergraph, part: &mut Partition) {
    let allowed = part.max_allowed_weight();
    let k = part.k();
    loop {
        let heavy = (0..k).max_by_key(|&b| part.block_weight(b)).unwrap_or(0);
        if part.block_weight(heavy) <= allowed || part.block_size(heavy) <= 1 {
            return;
        }
        let mut best: Option<(i64, VertexId, usize)> = None;
        for v in (0..h.num_vertices()).filter(|&v| part.block(v) == heavy) {
            let w = h.vertex_weight(v);
            for b in (0..k).filter(|&b| b != heavy) {
                if part.block_weight(b) + w >= part.block_weight(heavy) {
                    continue;
                }
                let gain = part.km1_gain(h, v, b);
                if best.is_none_or(|(g, _, _)| gain > g) {
                    best = Some((gain, v, b));
                }
            }
        }
        match best {
            Some((_, v, b)) => part.move_vertex(h, v, b),
            None => return,
        }
    }
}
