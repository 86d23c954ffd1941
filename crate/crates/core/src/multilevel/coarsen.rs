//! Heavy-edge matching contraction.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::hypergraph::{Hypergraph, VertexId, Weight};

/// Nets larger than this are ignored when rating contraction partners.
const RATING_NET_LIMIT: usize = 1000;

/// One contraction step: the coarse hypergraph and the map from the
/// vertices of the next finer level to coarse vertices.
#[derive(Debug, Clone)]
pub struct Level {
    pub hypergraph: Hypergraph,
    pub map: Vec<VertexId>,
}

/// Coarse levels, finest first. The input hypergraph itself is not stored.
#[derive(Debug, Clone, Default)]
pub struct Hierarchy {
    pub levels: Vec<Level>,
}

impl Hierarchy {
    pub fn depth(&self) -> usize {
        self.levels.len()
    }

    /// The hypergraph at `level`, where 0 is the input.
    pub fn hypergraph<'a>(&'a self, input: &'a Hypergraph, level: usize) -> &'a Hypergraph {
        if level == 0 {
            input
        } else {
            &self.levels[level - 1].hypergraph
        }
    }

    pub fn coarsest<'a>(&'a self, input: &'a Hypergraph) -> &'a Hypergraph {
        self.hypergraph(input, self.depth())
    }

    /// Block assignment of `level − 1` induced by one of `level`.
    pub fn project(&self, level: usize, coarse_blocks: &[usize]) -> Vec<usize> {
        self.levels[level - 1].map.iter().map(|&c| coarse_blocks[c]).collect()
    }
}

/// Contracts `h` until at most `target` vertices remain or contraction
/// stalls. Coarse vertices are capped at `max_weight`.
pub fn coarsen<R: Rng + ?Sized>(h: &Hypergraph, target: usize, max_weight: Weight, rng: &mut R) -> Hierarchy {
    let mut hierarchy = Hierarchy::default();
    loop {
        let current = hierarchy.coarsest(h);
        let n = current.num_vertices();
        if n <= target {
            break;
        }
        let (mut map, mut count) = heavy_edge_matching(current, max_weight, rng);
        if count * 10 > n * 9 {
            let (m, c) = random_matching(current, max_weight, rng);
            if c * 10 > n * 9 {
                break;
            }
            map = m;
            count = c;
        }
        let coarse = contract(current, &map, count);
        hierarchy.levels.push(Level { hypergraph: coarse, map });
    }
    hierarchy
}

/// Matches every vertex with its unmatched neighbour of highest rating
/// Σ ω(e)/(|e|−1). Returns the coarse id per vertex and the coarse count.
pub fn heavy_edge_matching<R: Rng + ?Sized>(h: &Hypergraph, max_weight: Weight, rng: &mut R) -> (Vec<VertexId>, usize) {
    const NONE: usize = usize::MAX;
    let n = h.num_vertices();
    let mut order: Vec<VertexId> = (0..n).collect();
    order.shuffle(rng);
    let mut partner = vec![NONE; n];
    let mut rating = vec![0f64; n];
    let mut touched = Vec::new();
    for &u in &order {
        if partner[u] != NONE {
            continue;
        }
        for &e in h.nets_of(u) {
            let size = h.net_size(e);
            if size > RATING_NET_LIMIT {
                continue;
            }
            let r = h.net_weight(e) as f64 / (size - 1) as f64;
            for &v in h.pins(e) {
                if v != u && partner[v] == NONE {
                    if rating[v] == 0.0 {
                        touched.push(v);
                    }
                    rating[v] += r;
                }
            }
        }
        let wu = h.vertex_weight(u);
        let mut best = NONE;
        let mut best_rating = 0.0;
        for &v in &touched {
            if wu + h.vertex_weight(v) <= max_weight && rating[v] > best_rating {
                best = v;
                best_rating = rating[v];
            }
        }
        for &v in &touched {
            rating[v] = 0.0;
        }
        touched.clear();
        if best != NONE {
            partner[u] = best;
            partner[best] = u;
        } else {
            partner[u] = u;
        }
    }
    numbering(&partner)
}

/// Pairs unmatched vertices in random order regardless of adjacency.
pub fn random_matching<R: Rng + ?Sized>(h: &Hypergraph, max_weight: Weight, rng: &mut R) -> (Vec<VertexId>, usize) {
    let n = h.num_vertices();
    let mut order: Vec<VertexId> = (0..n).collect();
    order.shuffle(rng);
    let mut partner: Vec<usize> = (0..n).collect();
    let mut pending: Option<VertexId> = None;
    for &u in &order {
        match pending {
            Some(v) if h.vertex_weight(u) + h.vertex_weight(v) <= max_weight => {
                partner[u] = v;
                partner[v] = u;
                pending = None;
            }
            _ => pending = Some(u),
        }
    }
    numbering(&partner)
}

fn numbering(partner: &[usize]) -> (Vec<VertexId>, usize) {
    const NONE: usize = usize::MAX;
    let mut map = vec![NONE; partner.len()];
    let mut count = 0;
    for u in 0..partner.len() {
        if map[u] == NONE {
            map[u] = count;
            map[partner[u]] = count;
            count += 1;
        }
    }
    (map, count)
}

/// Coarse hypergraph for a vertex map onto `count` coarse vertices.
/// Single-pin nets are dropped and parallel nets merged with summed weights.
pub fn contract(h: &Hypergraph, map: &[VertexId], count: usize) -> Hypergraph {
    let mut weights = vec![0; count];
    for v in 0..h.num_vertices() {
        weights[map[v]] += h.vertex_weight(v);
    }
    let mut index: BTreeMap<Vec<VertexId>, usize> = BTreeMap::new();
    let mut nets: Vec<Vec<VertexId>> = Vec::new();
    let mut net_weights: Vec<Weight> = Vec::new();
    for e in 0..h.num_nets() {
        let mut pins: Vec<VertexId> = h.pins(e).iter().map(|&v| map[v]).collect();
        pins.sort_unstable();
        pins.dedup();
        if pins.len() < 2 {
            continue;
        }
        match index.get(&pins) {
            Some(&i) => net_weights[i] += h.net_weight(e),
            None => {
                index.insert(pins.clone(), nets.len());
                nets.push(pins);
                net_weights.push(h.net_weight(e));
            }
        }
    }
    Hypergraph::with_weights(count, &nets, Some(net_weights), Some(weights)).expect("contraction preserves validity")
}
