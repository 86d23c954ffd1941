//! Initial k-way partitioning of the coarsest hypergraph.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::Rng;

use super::fm::{fm_refine, rebalance};
use crate::hypergraph::{Hypergraph, VertexId, Weight};
use crate::partition::{balanced_weight, Partition};

/// Shuffled vertices, each to the currently lightest block.
pub fn random_balanced<R: Rng + ?Sized>(h: &Hypergraph, k: usize, rng: &mut R) -> Vec<usize> {
    let mut order: Vec<VertexId> = (0..h.num_vertices()).collect();
    order.shuffle(rng);
    // heavy vertices first keeps the greedy close to balanced
    order.sort_by_key(|&v| core::cmp::Reverse(h.vertex_weight(v)));
    let mut weight = vec![0 as Weight; k];
    let mut blocks = vec![0; h.num_vertices()];
    for (x, &v) in order.iter().enumerate() {
        let b = if x < k { x } else { (0..k).min_by_key(|&b| weight[b]).unwrap() };
        blocks[v] = b;
        weight[b] += h.vertex_weight(v);
    }
    blocks
}

/// Grows blocks 0..k−1 one after another by BFS from random seeds up to
/// ⌈c(V)/k⌉; the rest goes to the last block.
pub fn bfs_growing<R: Rng + ?Sized>(h: &Hypergraph, k: usize, rng: &mut R) -> Vec<usize> {
    const FREE: usize = usize::MAX;
    let n = h.num_vertices();
    let target = balanced_weight(h.total_weight(), k);
    let mut blocks = vec![FREE; n];
    let mut order: Vec<VertexId> = (0..n).collect();
    order.shuffle(rng);
    let mut next_seed = 0;
    for b in 0..k.saturating_sub(1) {
        let mut weight = 0;
        let mut queue = VecDeque::new();
        let mut queued = vec![false; n];
        while weight < target {
            let v = match queue.pop_front() {
                Some(v) => v,
                None => {
                    while next_seed < n && blocks[order[next_seed]] != FREE {
                        next_seed += 1;
                    }
                    if next_seed == n {
                        break;
                    }
                    next_seed += 1;
                    order[next_seed - 1]
                }
            };
            if blocks[v] != FREE {
                continue;
            }
            if weight > 0 && weight + h.vertex_weight(v) > target {
                continue;
            }
            blocks[v] = b;
            weight += h.vertex_weight(v);
            for &e in h.nets_of(v) {
                for &u in h.pins(e) {
                    if blocks[u] == FREE && !queued[u] {
                        queued[u] = true;
                        queue.push_back(u);
                    }
                }
            }
        }
    }
    for b in blocks.iter_mut() {
        if *b == FREE {
            *b = k - 1;
        }
    }
    blocks
}

/// Ranking of candidate partitions: feasible first, then km1, then the
/// heaviest block.
fn score(part: &Partition) -> (bool, Weight, Weight) {
    (!part.is_balanced() || part.has_empty_block(), part.km1(), part.max_weight())
}

/// Best of `attempts` runs alternating random balanced assignment and BFS
/// growing, each followed by rebalancing and FM.
pub fn initial_partition<R: Rng + ?Sized>(
    h: &Hypergraph,
    k: usize,
    epsilon: f64,
    attempts: usize,
    fm_passes: usize,
    rng: &mut R,
) -> Partition {
    let mut best: Option<Partition> = None;
    for a in 0..attempts.max(1) {
        let blocks = if a % 2 == 0 { bfs_growing(h, k, rng) } else { random_balanced(h, k, rng) };
        let mut part = Partition::new(h, k, epsilon, blocks).expect("blocks are in range");
        rebalance(h, &mut part);
        fm_refine(h, &mut part, fm_passes, rng);
        if best.as_ref().is_none_or(|b| score(&part) < score(b)) {
            best = Some(part);
        }
    }
    best.expect("at least one attempt")
}
