use alloc::vec;
use alloc::vec::Vec;

use crate::hypergraph::{Hypergraph, Weight};
use crate::partition::Partition;

/// Graph on the blocks of a partition with an edge between every pair of
/// blocks that share a cut net.
#[derive(Debug, Clone)]
pub struct QuotientGraph {
    k: usize,
    /// Total weight of nets spanning both blocks, k×k, symmetric.
    pair_cut: Vec<Weight>,
    adjacent: Vec<bool>,
    pub active: Vec<bool>,
}

impl QuotientGraph {
    pub fn new(h: &Hypergraph, part: &Partition) -> Self {
        let k = part.k();
        let mut pair_cut = vec![0; k * k];
        let mut adjacent = vec![false; k * k];
        let mut blocks = Vec::new();
        for e in 0..h.num_nets() {
            if part.connectivity(e) < 2 {
                continue;
            }
            blocks.clear();
            blocks.extend((0..k).filter(|&b| part.pin_count(e, b) > 0));
            for (x, &a) in blocks.iter().enumerate() {
                for &b in &blocks[x + 1..] {
                    pair_cut[a * k + b] += h.net_weight(e);
                    pair_cut[b * k + a] += h.net_weight(e);
                    adjacent[a * k + b] = true;
                    adjacent[b * k + a] = true;
                }
            }
        }
        Self {
            k,
            pair_cut,
            adjacent,
            active: vec![true; k],
        }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn is_adjacent(&self, i: usize, j: usize) -> bool {
        self.adjacent[i * self.k + j]
    }

    /// Weight of nets with pins in both `i` and `j`.
    pub fn pair_cut_weight(&self, i: usize, j: usize) -> Weight {
        self.pair_cut[i * self.k + j]
    }

    /// Adjacent pairs (i, j), i < j, in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.k {
            for j in i + 1..self.k {
                if self.is_adjacent(i, j) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    pub fn any_active(&self) -> bool {
        self.active.iter().any(|&a| a)
    }
}
