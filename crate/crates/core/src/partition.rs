use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::hypergraph::{Hypergraph, NetId, VertexId, Weight};

/// ⌈c(V)/k⌉, the perfectly balanced block weight.
pub fn balanced_weight(total: Weight, k: usize) -> Weight {
    total.div_ceil(k as Weight)
}

/// L_max = (1+ε)⌈c(V)/k⌉ as a float.
pub fn l_max(total: Weight, k: usize, epsilon: f64) -> f64 {
    (1.0 + epsilon) * balanced_weight(total, k) as f64
}

/// Largest integer block weight satisfying the balance constraint.
///
/// Block weights are integers, so `w <= L_max` iff `w <= floor(L_max)`.
/// The small slack absorbs representation error in products such as
/// `1.03 * 100`.
pub fn max_block_weight(total: Weight, k: usize, epsilon: f64) -> Weight {
    let bound = l_max(total, k, epsilon);
    if bound < 0.0 {
        return 0;
    }
    libm_floor(bound + 1e-9)
}

/// max_i c(V_i) / ⌈c(V)/k⌉ − 1.
pub fn imbalance_of(max_weight: Weight, total: Weight, k: usize) -> f64 {
    let avg = balanced_weight(total, k);
    if avg == 0 {
        return 0.0;
    }
    max_weight as f64 / avg as f64 - 1.0
}

fn libm_floor(x: f64) -> Weight {
    // x >= 0; truncation is floor for non-negative values
    x as Weight
}

/// A k-way assignment of vertices to blocks, together with block weights
/// and per-net pin counts per block so that λ(e) and the objectives can be
/// maintained under single-vertex moves.
#[derive(Debug, Clone, PartialEq)]
pub struct Partition {
    k: usize,
    epsilon: f64,
    block_of: Vec<usize>,
    block_weight: Vec<Weight>,
    block_size: Vec<usize>,
    pin_count: Vec<u32>,
    connectivity: Vec<u32>,
    total_weight: Weight,
    km1: Weight,
    cut: Weight,
}

impl Partition {
    pub fn new(h: &Hypergraph, k: usize, epsilon: f64, block_of: Vec<usize>) -> Result<Self> {
        if k == 0 {
            return Err(Error::ZeroBlocks);
        }
        if block_of.len() != h.num_vertices() {
            return Err(Error::LengthMismatch {
                expected: h.num_vertices(),
                actual: block_of.len(),
            });
        }
        if let Some(&block) = block_of.iter().find(|&&b| b >= k) {
            return Err(Error::InvalidBlock { block, k });
        }
        let mut block_weight = vec![0; k];
        let mut block_size = vec![0; k];
        for (v, &b) in block_of.iter().enumerate() {
            block_weight[b] += h.vertex_weight(v);
            block_size[b] += 1;
        }
        let mut pin_count = vec![0u32; h.num_nets() * k];
        let mut connectivity = vec![0u32; h.num_nets()];
        let mut km1 = 0;
        let mut cut = 0;
        for e in 0..h.num_nets() {
            for &v in h.pins(e) {
                let c = &mut pin_count[e * k + block_of[v]];
                if *c == 0 {
                    connectivity[e] += 1;
                }
                *c += 1;
            }
            if connectivity[e] > 1 {
                km1 += (connectivity[e] as Weight - 1) * h.net_weight(e);
                cut += h.net_weight(e);
            }
        }
        Ok(Self {
            k,
            epsilon,
            block_of,
            block_weight,
            block_size,
            pin_count,
            connectivity,
            total_weight: h.total_weight(),
            km1,
            cut,
        })
    }

    /// Every vertex in block 0.
    pub fn single_block(h: &Hypergraph, k: usize, epsilon: f64) -> Result<Self> {
        Self::new(h, k, epsilon, vec![0; h.num_vertices()])
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn set_epsilon(&mut self, epsilon: f64) {
        self.epsilon = epsilon;
    }

    #[inline]
    pub fn block(&self, v: VertexId) -> usize {
        self.block_of[v]
    }

    pub fn blocks(&self) -> &[usize] {
        &self.block_of
    }

    pub fn into_blocks(self) -> Vec<usize> {
        self.block_of
    }

    #[inline]
    pub fn block_weight(&self, b: usize) -> Weight {
        self.block_weight[b]
    }

    pub fn block_weights(&self) -> &[Weight] {
        &self.block_weight
    }

    pub fn block_size(&self, b: usize) -> usize {
        self.block_size[b]
    }

    pub fn has_empty_block(&self) -> bool {
        self.block_size.contains(&0)
    }

    pub fn total_weight(&self) -> Weight {
        self.total_weight
    }

    pub fn max_weight(&self) -> Weight {
        self.block_weight.iter().copied().max().unwrap_or(0)
    }

    pub fn l_max(&self) -> f64 {
        l_max(self.total_weight, self.k, self.epsilon)
    }

    /// Largest feasible integer block weight under this partition's ε.
    pub fn max_allowed_weight(&self) -> Weight {
        max_block_weight(self.total_weight, self.k, self.epsilon)
    }

    pub fn is_balanced(&self) -> bool {
        self.max_weight() <= self.max_allowed_weight()
    }

    pub fn imbalance(&self) -> f64 {
        imbalance_of(self.max_weight(), self.total_weight, self.k)
    }

    #[inline]
    pub fn pin_count(&self, e: NetId, b: usize) -> u32 {
        self.pin_count[e * self.k + b]
    }

    /// λ(e).
    #[inline]
    pub fn connectivity(&self, e: NetId) -> usize {
        self.connectivity[e] as usize
    }

    /// Λ(e), ascending.
    pub fn connectivity_set(&self, e: NetId) -> Vec<usize> {
        (0..self.k).filter(|&b| self.pin_count(e, b) > 0).collect()
    }

    /// (λ−1) objective.
    pub fn km1(&self) -> Weight {
        self.km1
    }

    /// Cut-net objective.
    pub fn cut(&self) -> Weight {
        self.cut
    }

    /// Decrease of the (λ−1) objective if `v` moved to block `to`.
    pub fn km1_gain(&self, h: &Hypergraph, v: VertexId, to: usize) -> i64 {
        let from = self.block_of[v];
        if from == to {
            return 0;
        }
        let mut gain = 0i64;
        for &e in h.nets_of(v) {
            let w = h.net_weight(e) as i64;
            if self.pin_count(e, from) == 1 {
                gain += w;
            }
            if self.pin_count(e, to) == 0 {
                gain -= w;
            }
        }
        gain
    }

    /// Moves `v` to block `to`, updating all cached quantities.
    pub fn move_vertex(&mut self, h: &Hypergraph, v: VertexId, to: usize) {
        let from = self.block_of[v];
        if from == to {
            return;
        }
        let k = self.k;
        for &e in h.nets_of(v) {
            let w = h.net_weight(e);
            let before = self.connectivity[e];
            let pf = &mut self.pin_count[e * k + from];
            *pf -= 1;
            if *pf == 0 {
                self.connectivity[e] -= 1;
            }
            let pt = &mut self.pin_count[e * k + to];
            if *pt == 0 {
                self.connectivity[e] += 1;
            }
            *pt += 1;
            let after = self.connectivity[e];
            self.km1 = self.km1 + (after as Weight).saturating_sub(1) * w
                - (before as Weight).saturating_sub(1) * w;
            match (before > 1, after > 1) {
                (false, true) => self.cut += w,
                (true, false) => self.cut -= w,
                _ => {}
            }
        }
        let c = h.vertex_weight(v);
        self.block_weight[from] -= c;
        self.block_weight[to] += c;
        self.block_size[from] -= 1;
        self.block_size[to] += 1;
        self.block_of[v] = to;
    }
}

/// λ(e) and Λ(e) evaluated directly from the pins.
pub fn connectivity(h: &Hypergraph, part: &Partition, e: NetId) -> Result<(usize, Vec<usize>)> {
    if e >= h.num_nets() {
        return Err(Error::InvalidNet(e));
    }
    let mut blocks: Vec<usize> = h.pins(e).iter().map(|&v| part.block(v)).collect();
    blocks.sort_unstable();
    blocks.dedup();
    Ok((blocks.len(), blocks))
}

/// Σ over cut nets of (λ(e)−1)·ω(e), recomputed from scratch.
pub fn km1_metric(h: &Hypergraph, blocks: &[usize]) -> Weight {
    let mut total = 0;
    let mut seen = Vec::new();
    for e in 0..h.num_nets() {
        seen.clear();
        seen.extend(h.pins(e).iter().map(|&v| blocks[v]));
        seen.sort_unstable();
        seen.dedup();
        total += (seen.len() as Weight - 1) * h.net_weight(e);
    }
    total
}

/// Σ over cut nets of ω(e), recomputed from scratch.
pub fn cut_metric(h: &Hypergraph, blocks: &[usize]) -> Weight {
    (0..h.num_nets())
        .filter(|&e| {
            let pins = h.pins(e);
            pins.iter().any(|&v| blocks[v] != blocks[pins[0]])
        })
        .map(|e| h.net_weight(e))
        .sum()
}

/// Block weights recomputed from scratch.
pub fn block_weights(h: &Hypergraph, blocks: &[usize], k: usize) -> Vec<Weight> {
    let mut w = vec![0; k];
    for (v, &b) in blocks.iter().enumerate() {
        w[b] += h.vertex_weight(v);
    }
    w
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergraph::tests::h0;
    use proptest::prelude::*;

    #[test]
    fn h0_connectivity_and_metrics() {
        let h = h0();
        let p = Partition::new(&h, 2, 0.03, vec![0, 0, 1, 1]).unwrap();
        assert_eq!(connectivity(&h, &p, 1).unwrap(), (2, vec![0, 1]));
        assert_eq!(connectivity(&h, &p, 0).unwrap(), (1, vec![0]));
        assert_eq!(p.km1(), 2);
        assert_eq!(p.cut(), 2);
        assert_eq!(connectivity(&h, &p, 3), Err(Error::InvalidNet(3)));

        let q = Partition::new(&h, 2, 0.03, vec![0, 1, 1, 1]).unwrap();
        assert_eq!(q.km1(), 2);
        assert_eq!(q.imbalance(), 0.5);

        let single = Partition::single_block(&h, 1, 0.0).unwrap();
        assert_eq!(single.km1(), 0);
        assert_eq!(single.cut(), 0);
        for e in 0..3 {
            assert_eq!(single.connectivity(e), 1);
        }
    }

    #[test]
    fn l_max_arithmetic() {
        // c(V)=100, k=3, ε=0.03: L_max = 1.03 * 34 = 35.02
        assert_eq!(balanced_weight(100, 3), 34);
        assert!((l_max(100, 3, 0.03) - 35.02).abs() < 1e-12);
        assert_eq!(max_block_weight(100, 3, 0.03), 35);
        // exact products must not lose a unit to rounding
        assert_eq!(max_block_weight(100, 1, 0.03), 103);
        assert_eq!(max_block_weight(4, 2, 0.5), 3);
    }

    #[test]
    fn even_bipartition_has_zero_imbalance() {
        let h = h0();
        let p = Partition::new(&h, 2, 0.0, vec![0, 0, 1, 1]).unwrap();
        assert_eq!(p.imbalance(), 0.0);
        assert!(p.is_balanced());
    }

    #[test]
    fn invalid_block_rejected() {
        let h = h0();
        assert_eq!(
            Partition::new(&h, 2, 0.0, vec![0, 2, 1, 1]),
            Err(Error::InvalidBlock { block: 2, k: 2 })
        );
    }

    fn arb_instance() -> impl Strategy<Value = (Hypergraph, usize, Vec<usize>, Vec<(usize, usize)>)> {
        (2usize..10, 1usize..5).prop_flat_map(|(n, k)| {
            let net = proptest::collection::btree_set(0..n, 1..=n.min(5))
                .prop_map(|s| s.into_iter().collect::<Vec<_>>());
            (
                proptest::collection::vec(net, 0..12),
                proptest::collection::vec(1u64..5, 0..12),
                proptest::collection::vec(0..k, n),
                proptest::collection::vec((0..n, 0..k), 0..20),
            )
                .prop_map(move |(nets, w, blocks, moves)| {
                    let weights = (0..nets.len()).map(|i| *w.get(i).unwrap_or(&1)).collect();
                    let h = Hypergraph::with_weights(n, &nets, Some(weights), None).unwrap();
                    (h, k, blocks, moves)
                })
        })
    }

    proptest! {
        #[test]
        fn incremental_moves_match_recomputation((h, k, blocks, moves) in arb_instance()) {
            let mut p = Partition::new(&h, k, 0.03, blocks).unwrap();
            for (v, to) in moves {
                let gain = p.km1_gain(&h, v, to);
                let before = p.km1() as i64;
                p.move_vertex(&h, v, to);
                prop_assert_eq!(p.km1() as i64, before - gain);
                prop_assert_eq!(p.km1(), km1_metric(&h, p.blocks()));
                prop_assert_eq!(p.cut(), cut_metric(&h, p.blocks()));
                prop_assert_eq!(p.block_weights(), &block_weights(&h, p.blocks(), k)[..]);
            }
        }

        #[test]
        fn km1_bounded_and_equal_to_cut_for_bipartitions((h, k, blocks, _m) in arb_instance()) {
            let km1 = km1_metric(&h, &blocks);
            let cut = cut_metric(&h, &blocks);
            prop_assert!(km1 <= (k as Weight - 1) * cut);
            if k <= 2 {
                prop_assert_eq!(km1, cut);
            }
        }
    }
}
