use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::hypergraph::{Hypergraph, NetId, VertexId};
use crate::partition::Partition;

const ABSENT: usize = usize::MAX;

/// Position of a net relative to a vertex set B.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NetClass {
    /// e ∩ B = ∅
    External,
    /// e ⊆ B
    Internal,
    /// pins on both sides of B
    Border,
}

/// Pins of a net that lie outside B, counted by the block they lie in.
#[derive(Debug, Default, Clone, Copy, PartialEq, Eq)]
pub struct ExternalPins {
    /// in V_i, the block placed on the source side
    pub first: u32,
    /// in V_j, the block placed on the sink side
    pub second: u32,
    /// in any other block
    pub other: u32,
}

impl ExternalPins {
    pub fn total(&self) -> u32 {
        self.first + self.second + self.other
    }
}

/// The subhypergraph H_B induced by a vertex set B, with the classification
/// of nets and vertices relative to B.
///
/// Parent↔local id maps are dense arrays.
#[derive(Debug, Clone)]
pub struct SubHypergraph {
    local: Hypergraph,
    vertex_to_parent: Vec<VertexId>,
    parent_to_local: Vec<usize>,
    net_to_parent: Vec<NetId>,
    net_class: Vec<NetClass>,
    internal_border: Vec<bool>,
    external: Vec<ExternalPins>,
    pair: Option<(usize, usize)>,
    in_first: Vec<bool>,
}

impl SubHypergraph {
    /// H_B for an arbitrary vertex set; external pins are all counted as
    /// `other`.
    pub fn new(h: &Hypergraph, members: &[VertexId]) -> Result<Self> {
        Self::build(h, members, None)
    }

    /// H_B for the whole hypergraph.
    pub fn whole(h: &Hypergraph) -> Self {
        let all: Vec<VertexId> = (0..h.num_vertices()).collect();
        Self::build(h, &all, None).expect("all vertices are valid")
    }

    fn build(
        h: &Hypergraph,
        members: &[VertexId],
        pair: Option<(&Partition, usize, usize)>,
    ) -> Result<Self> {
        let mut parent_to_local = vec![ABSENT; h.num_vertices()];
        let mut vertex_to_parent = Vec::with_capacity(members.len());
        for &v in members {
            if v >= h.num_vertices() {
                return Err(Error::InvalidVertex(v));
            }
            if let Some((part, i, j)) = pair {
                let b = part.block(v);
                if b != i && b != j {
                    return Err(Error::VertexOutsidePair { vertex: v, i, j });
                }
            }
            if parent_to_local[v] == ABSENT {
                parent_to_local[v] = vertex_to_parent.len();
                vertex_to_parent.push(v);
            }
        }

        let mut net_class = vec![NetClass::External; h.num_nets()];
        let mut touched = Vec::new();
        for &v in &vertex_to_parent {
            for &e in h.nets_of(v) {
                if net_class[e] == NetClass::External {
                    net_class[e] = NetClass::Internal;
                    touched.push(e);
                }
            }
        }
        touched.sort_unstable();

        let mut nets = Vec::with_capacity(touched.len());
        let mut external = Vec::with_capacity(touched.len());
        let mut internal_border = vec![false; vertex_to_parent.len()];
        for &e in &touched {
            let mut pins = Vec::new();
            let mut ext = ExternalPins::default();
            for &u in h.pins(e) {
                let l = parent_to_local[u];
                if l != ABSENT {
                    pins.push(l);
                } else {
                    match pair {
                        Some((part, i, _)) if part.block(u) == i => ext.first += 1,
                        Some((part, _, j)) if part.block(u) == j => ext.second += 1,
                        _ => ext.other += 1,
                    }
                }
            }
            if ext.total() > 0 {
                net_class[e] = NetClass::Border;
                for &l in &pins {
                    internal_border[l] = true;
                }
            }
            nets.push(pins);
            external.push(ext);
        }

        let vertex_weights = vertex_to_parent.iter().map(|&v| h.vertex_weight(v)).collect();
        let net_weights = touched.iter().map(|&e| h.net_weight(e)).collect();
        let local = Hypergraph::with_weights(
            vertex_to_parent.len(),
            &nets,
            Some(net_weights),
            Some(vertex_weights),
        )?;
        let in_first = match pair {
            Some((part, i, _)) => vertex_to_parent.iter().map(|&v| part.block(v) == i).collect(),
            None => vec![true; vertex_to_parent.len()],
        };

        Ok(Self {
            local,
            vertex_to_parent,
            parent_to_local,
            net_to_parent: touched,
            net_class,
            internal_border,
            external,
            pair: pair.map(|(_, i, j)| (i, j)),
            in_first,
        })
    }

    /// H_B as a standalone hypergraph with local ids.
    pub fn hypergraph(&self) -> &Hypergraph {
        &self.local
    }

    pub fn num_vertices(&self) -> usize {
        self.local.num_vertices()
    }

    pub fn num_nets(&self) -> usize {
        self.local.num_nets()
    }

    pub fn is_empty(&self) -> bool {
        self.local.num_vertices() == 0
    }

    pub fn parent_vertex(&self, local: VertexId) -> VertexId {
        self.vertex_to_parent[local]
    }

    pub fn parent_vertices(&self) -> &[VertexId] {
        &self.vertex_to_parent
    }

    pub fn local_vertex(&self, parent: VertexId) -> Option<VertexId> {
        match self.parent_to_local.get(parent) {
            Some(&l) if l != ABSENT => Some(l),
            _ => None,
        }
    }

    pub fn parent_net(&self, local: NetId) -> NetId {
        self.net_to_parent[local]
    }

    /// Classification of a parent net.
    pub fn net_class(&self, parent: NetId) -> NetClass {
        self.net_class[parent]
    }

    pub fn local_net_class(&self, local: NetId) -> NetClass {
        self.net_class[self.net_to_parent[local]]
    }

    pub fn is_border_net(&self, local: NetId) -> bool {
        self.local_net_class(local) == NetClass::Border
    }

    /// Whether a local vertex belongs to →B.
    pub fn is_internal_border(&self, local: VertexId) -> bool {
        self.internal_border[local]
    }

    /// →B as local ids.
    pub fn internal_border(&self) -> Vec<VertexId> {
        (0..self.num_vertices()).filter(|&v| self.internal_border[v]).collect()
    }

    pub fn external_pins(&self, local: NetId) -> ExternalPins {
        self.external[local]
    }

    /// The refined block pair, when built by [`induced_subhypergraph`].
    pub fn pair(&self) -> Option<(usize, usize)> {
        self.pair
    }

    /// Whether a local vertex currently lies in the first block of the pair.
    pub fn in_first(&self, local: VertexId) -> bool {
        self.in_first[local]
    }
}

/// H_B for B ⊆ V_i ∪ V_j with external pins classified by block.
pub fn induced_subhypergraph(
    h: &Hypergraph,
    part: &Partition,
    members: &[VertexId],
    i: usize,
    j: usize,
) -> Result<SubHypergraph> {
    if i >= part.k() {
        return Err(Error::InvalidBlock { block: i, k: part.k() });
    }
    if j >= part.k() {
        return Err(Error::InvalidBlock { block: j, k: part.k() });
    }
    SubHypergraph::build(h, members, Some((part, i, j)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergraph::tests::h0;

    #[test]
    fn h0_corridor_classification() {
        let h = h0();
        let p = Partition::new(&h, 2, 0.0, vec![0, 0, 1, 1]).unwrap();
        let s = induced_subhypergraph(&h, &p, &[1, 2], 0, 1).unwrap();
        assert!(s.hypergraph().is_consistent());
        assert_eq!(s.num_nets(), 3);
        for e in 0..3 {
            assert_eq!(s.net_class(e), NetClass::Border);
        }
        // e1 ∩ B = {v2}, external v1 in V1
        assert_eq!(s.hypergraph().pins(0), &[0]);
        assert_eq!(s.external_pins(0), ExternalPins { first: 1, second: 0, other: 0 });
        // e2 ∩ B = {v2, v3}, external v4 in V2
        assert_eq!(s.hypergraph().pins(1), &[0, 1]);
        assert_eq!(s.external_pins(1), ExternalPins { first: 0, second: 1, other: 0 });
        // e3 ∩ B = {v3}, external v1 in V1
        assert_eq!(s.hypergraph().pins(2), &[1]);
        assert_eq!(s.external_pins(2), ExternalPins { first: 1, second: 0, other: 0 });
        assert_eq!(s.internal_border(), vec![0, 1]);
        assert!(s.in_first(0));
        assert!(!s.in_first(1));
    }

    #[test]
    fn whole_vertex_set_is_all_internal() {
        let h = h0();
        let p = Partition::new(&h, 2, 0.0, vec![0, 0, 1, 1]).unwrap();
        let s = induced_subhypergraph(&h, &p, &[0, 1, 2, 3], 0, 1).unwrap();
        assert!((0..3).all(|e| s.net_class(e) == NetClass::Internal));
        assert!(s.internal_border().is_empty());
    }

    #[test]
    fn empty_set_is_all_external() {
        let h = h0();
        let p = Partition::new(&h, 2, 0.0, vec![0, 0, 1, 1]).unwrap();
        let s = induced_subhypergraph(&h, &p, &[], 0, 1).unwrap();
        assert!(s.is_empty());
        assert_eq!(s.num_nets(), 0);
        assert!((0..3).all(|e| s.net_class(e) == NetClass::External));
    }

    #[test]
    fn vertex_outside_pair_rejected() {
        let h = h0();
        let p = Partition::new(&h, 3, 0.0, vec![0, 0, 1, 2]).unwrap();
        assert_eq!(
            induced_subhypergraph(&h, &p, &[0, 3], 0, 1).unwrap_err(),
            Error::VertexOutsidePair { vertex: 3, i: 0, j: 1 }
        );
    }

    #[test]
    fn id_maps_round_trip() {
        let h = h0();
        let s = SubHypergraph::new(&h, &[3, 1]).unwrap();
        assert_eq!(s.parent_vertex(0), 3);
        assert_eq!(s.local_vertex(1), Some(1));
        assert_eq!(s.local_vertex(0), None);
        for e in 0..s.num_nets() {
            let parent = s.parent_net(e);
            for &l in s.hypergraph().pins(e) {
                assert!(h.pins(parent).contains(&s.parent_vertex(l)));
            }
        }
    }
}
