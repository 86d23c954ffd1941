//! Flow networks derived from a (sub)hypergraph.
//!
//! Three constructions are supported:
//!
//! - **Lawler**: every net gets a pair of bridging nodes e′, e″ joined by an
//!   arc of capacity ω(e); every pin p gets infinite arcs (p, e′) and (e″, p).
//! - **Liu-Wong**: like Lawler for nets with at least three pins, but a
//!   two-pin net {u, v} becomes the arc pair (u, v), (v, u) of capacity ω(e).
//!   Single-pin nets are not represented.
//! - **Reduced**: Liu-Wong with low-degree vertices eliminated. A vertex of
//!   degree at most three that is not incident to a two-pin net is removed
//!   and replaced by a directed clique (a″, b′) over its incident nets. The
//!   clique has d(d−1) ≤ 2d arcs, so the network never grows, and the
//!   minimum cut value is unchanged.

use alloc::vec;
use alloc::vec::Vec;

use crate::hypergraph::{Hypergraph, NetId, VertexId, Weight};
use crate::subhypergraph::SubHypergraph;

pub type NodeId = usize;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NodeKind {
    Vertex(VertexId),
    /// e′
    BridgeIn(NetId),
    /// e″
    BridgeOut(NetId),
    Source,
    Sink,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Capacity {
    Finite(Weight),
    Infinite,
}

impl Capacity {
    pub fn is_infinite(self) -> bool {
        matches!(self, Capacity::Infinite)
    }

    /// Capacity with infinity replaced by `infinity`.
    pub fn effective(self, infinity: Weight) -> Weight {
        match self {
            Capacity::Finite(w) => w,
            Capacity::Infinite => infinity,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Arc {
    pub from: NodeId,
    pub to: NodeId,
    pub capacity: Capacity,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NetworkVariant {
    Lawler,
    LiuWong,
    Reduced,
}

impl NetworkVariant {
    pub const ALL: [NetworkVariant; 3] = [Self::Lawler, Self::LiuWong, Self::Reduced];

    pub fn name(self) -> &'static str {
        match self {
            Self::Lawler => "lawler",
            Self::LiuWong => "liu-wong",
            Self::Reduced => "reduced",
        }
    }
}

/// How a single net is to be represented, overriding the variant's default.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NetRepresentation {
    /// Whatever the network variant prescribes for the net's size.
    Auto,
    /// Bridging nodes regardless of size.
    Bridged,
    /// Not represented; the caller models the net itself.
    Omitted,
}

/// Per-build overrides used by the flow-problem layer.
#[derive(Debug, Clone, Copy, Default)]
pub struct BuildOptions<'a> {
    /// Vertices that must keep their node (never eliminated).
    pub keep: Option<&'a [bool]>,
    /// Representation override per net.
    pub nets: Option<&'a [NetRepresentation]>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct NetworkStats {
    pub num_nodes: usize,
    pub num_arcs: usize,
    pub num_infinite_arcs: usize,
}

/// Directed capacitated network with typed nodes and maps back to the
/// hypergraph it was built from.
#[derive(Debug, Clone)]
pub struct FlowNetwork {
    nodes: Vec<NodeKind>,
    arcs: Vec<Arc>,
    vertex_node: Vec<Option<NodeId>>,
    bridge_in: Vec<Option<NodeId>>,
    bridge_out: Vec<Option<NodeId>>,
    direct: Vec<bool>,
    removed: Vec<bool>,
}

impl FlowNetwork {
    pub fn nodes(&self) -> &[NodeKind] {
        &self.nodes
    }

    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    pub fn num_nodes(&self) -> usize {
        self.nodes.len()
    }

    pub fn num_arcs(&self) -> usize {
        self.arcs.len()
    }

    pub fn node_kind(&self, node: NodeId) -> NodeKind {
        self.nodes[node]
    }

    /// Node of a hypergraph vertex, `None` if it was eliminated.
    pub fn vertex_node(&self, v: VertexId) -> Option<NodeId> {
        self.vertex_node[v]
    }

    pub fn bridge_in(&self, e: NetId) -> Option<NodeId> {
        self.bridge_in[e]
    }

    pub fn bridge_out(&self, e: NetId) -> Option<NodeId> {
        self.bridge_out[e]
    }

    /// Whether the net is represented by a pair of direct arcs.
    pub fn is_direct(&self, e: NetId) -> bool {
        self.direct[e]
    }

    pub fn is_removed(&self, v: VertexId) -> bool {
        self.removed[v]
    }

    pub fn removed_vertices(&self) -> Vec<VertexId> {
        (0..self.removed.len()).filter(|&v| self.removed[v]).collect()
    }

    pub fn num_vertices(&self) -> usize {
        self.vertex_node.len()
    }

    pub fn num_nets(&self) -> usize {
        self.bridge_in.len()
    }

    pub fn add_node(&mut self, kind: NodeKind) -> NodeId {
        self.nodes.push(kind);
        self.nodes.len() - 1
    }

    pub fn add_arc(&mut self, from: NodeId, to: NodeId, capacity: Capacity) {
        debug_assert!(from < self.nodes.len() && to < self.nodes.len());
        debug_assert!(capacity != Capacity::Finite(0));
        self.arcs.push(Arc { from, to, capacity });
    }

    pub(crate) fn set_bridge_in(&mut self, e: NetId, node: NodeId) {
        self.bridge_in[e] = Some(node);
    }

    pub(crate) fn set_bridge_out(&mut self, e: NetId, node: NodeId) {
        self.bridge_out[e] = Some(node);
    }

    /// Sum of all finite capacities.
    pub fn finite_capacity(&self) -> Weight {
        self.arcs
            .iter()
            .filter_map(|a| match a.capacity {
                Capacity::Finite(w) => Some(w),
                Capacity::Infinite => None,
            })
            .sum()
    }

    pub fn stats(&self) -> NetworkStats {
        network_stats(self)
    }
}

pub fn network_stats(network: &FlowNetwork) -> NetworkStats {
    NetworkStats {
        num_nodes: network.nodes.len(),
        num_arcs: network.arcs.len(),
        num_infinite_arcs: network.arcs.iter().filter(|a| a.capacity.is_infinite()).count(),
    }
}

pub fn build_lawler(sub: &SubHypergraph) -> FlowNetwork {
    build(sub.hypergraph(), NetworkVariant::Lawler, BuildOptions::default())
}

pub fn build_liu_wong(sub: &SubHypergraph) -> FlowNetwork {
    build(sub.hypergraph(), NetworkVariant::LiuWong, BuildOptions::default())
}

pub fn build_reduced(sub: &SubHypergraph) -> FlowNetwork {
    build(sub.hypergraph(), NetworkVariant::Reduced, BuildOptions::default())
}

pub fn build_network(sub: &SubHypergraph, variant: NetworkVariant, opts: BuildOptions<'_>) -> FlowNetwork {
    build(sub.hypergraph(), variant, opts)
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Repr {
    None,
    Direct,
    Bridged,
}

fn representation(h: &Hypergraph, variant: NetworkVariant, opts: &BuildOptions<'_>, e: NetId) -> Repr {
    let choice = opts.nets.map_or(NetRepresentation::Auto, |n| n[e]);
    match choice {
        NetRepresentation::Omitted => Repr::None,
        NetRepresentation::Bridged => Repr::Bridged,
        NetRepresentation::Auto => match (variant, h.net_size(e)) {
            (NetworkVariant::Lawler, _) => Repr::Bridged,
            (_, 1) => Repr::None,
            (_, 2) => Repr::Direct,
            _ => Repr::Bridged,
        },
    }
}

/// Builds the network of `variant` on `h`.
pub fn build(h: &Hypergraph, variant: NetworkVariant, opts: BuildOptions<'_>) -> FlowNetwork {
    let n = h.num_vertices();
    let m = h.num_nets();
    let repr: Vec<Repr> = (0..m).map(|e| representation(h, variant, &opts, e)).collect();

    let mut removed = vec![false; n];
    if variant == NetworkVariant::Reduced {
        for (v, slot) in removed.iter_mut().enumerate() {
            if opts.keep.is_some_and(|keep| keep[v]) {
                continue;
            }
            let mut bridged = 0;
            let mut direct = false;
            for &e in h.nets_of(v) {
                match repr[e] {
                    Repr::Bridged => bridged += 1,
                    Repr::Direct => direct = true,
                    Repr::None => {}
                }
            }
            // vertices without any represented net stay, as isolated nodes
            *slot = !direct && (1..=3).contains(&bridged);
        }
    }

    let mut net = FlowNetwork {
        nodes: Vec::with_capacity(n + 2 * m),
        arcs: Vec::new(),
        vertex_node: vec![None; n],
        bridge_in: vec![None; m],
        bridge_out: vec![None; m],
        direct: repr.iter().map(|&r| r == Repr::Direct).collect(),
        removed,
    };
    for v in 0..n {
        if !net.removed[v] {
            net.vertex_node[v] = Some(net.add_node(NodeKind::Vertex(v)));
        }
    }
    for e in 0..m {
        if repr[e] == Repr::Bridged {
            net.bridge_in[e] = Some(net.add_node(NodeKind::BridgeIn(e)));
            net.bridge_out[e] = Some(net.add_node(NodeKind::BridgeOut(e)));
        }
    }

    for e in 0..m {
        let w = Capacity::Finite(h.net_weight(e));
        match repr[e] {
            Repr::None => {}
            Repr::Bridged => {
                let (ein, eout) = (net.bridge_in[e].unwrap(), net.bridge_out[e].unwrap());
                net.add_arc(ein, eout, w);
                for &p in h.pins(e) {
                    if let Some(node) = net.vertex_node[p] {
                        net.add_arc(node, ein, Capacity::Infinite);
                        net.add_arc(eout, node, Capacity::Infinite);
                    }
                }
            }
            Repr::Direct => {
                let pins = h.pins(e);
                let (u, v) = (net.vertex_node[pins[0]].unwrap(), net.vertex_node[pins[1]].unwrap());
                net.add_arc(u, v, w);
                net.add_arc(v, u, w);
            }
        }
    }

    for v in 0..n {
        if !net.removed[v] {
            continue;
        }
        let incident: Vec<NetId> = h
            .nets_of(v)
            .iter()
            .copied()
            .filter(|&e| repr[e] == Repr::Bridged)
            .collect();
        for &a in &incident {
            for &b in &incident {
                if a != b {
                    let (from, to) = (net.bridge_out[a].unwrap(), net.bridge_in[b].unwrap());
                    net.add_arc(from, to, Capacity::Infinite);
                }
            }
        }
    }
    net
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergraph::tests::h0;

    fn whole(h: &Hypergraph) -> SubHypergraph {
        SubHypergraph::whole(h)
    }

    fn counts(n: &FlowNetwork) -> (usize, usize) {
        (n.num_nodes(), n.num_arcs())
    }

    #[test]
    fn h0_network_sizes() {
        let s = whole(&h0());
        assert_eq!(counts(&build_lawler(&s)), (10, 17));
        assert_eq!(counts(&build_liu_wong(&s)), (6, 11));
        let reduced = build_reduced(&s);
        assert_eq!(counts(&reduced), (5, 9));
        assert_eq!(reduced.removed_vertices(), vec![3]);
    }

    #[test]
    fn small_single_net_sizes() {
        let two = Hypergraph::new(2, &[vec![0, 1]]).unwrap();
        assert_eq!(counts(&build_lawler(&whole(&two))), (4, 5));
        let one = Hypergraph::new(1, &[vec![0]]).unwrap();
        assert_eq!(counts(&build_lawler(&whole(&one))), (3, 3));
        let three = Hypergraph::new(3, &[vec![0, 1, 2]]).unwrap();
        assert_eq!(counts(&build_liu_wong(&whole(&three))), (5, 7));
    }

    #[test]
    fn graph_input_has_no_bridging_nodes_in_liu_wong() {
        let g = Hypergraph::new(4, &[vec![0, 1], vec![1, 2], vec![2, 3], vec![3, 0]]).unwrap();
        let s = whole(&g);
        assert_eq!(build_liu_wong(&s).num_nodes(), 4);
        assert_eq!(build_lawler(&s).num_nodes(), 4 + 2 * 4);
    }

    #[test]
    fn degree_three_vertex_replaced_by_clique() {
        // v0 in three nets of size 3; the other pins have degree 4 via a
        // ring of 3-pin nets so they stay.
        let nets = vec![
            vec![0, 1, 2],
            vec![0, 3, 4],
            vec![0, 5, 6],
            vec![1, 3, 5],
            vec![2, 4, 6],
            vec![1, 4, 6],
            vec![2, 3, 5],
            vec![1, 2, 3],
            vec![4, 5, 6],
        ];
        let h = Hypergraph::new(7, &nets).unwrap();
        let s = whole(&h);
        assert!((1..7).all(|v| h.degree(v) >= 4));
        let lw = build_liu_wong(&s);
        let red = build_reduced(&s);
        assert_eq!(red.removed_vertices(), vec![0]);
        assert_eq!(red.num_nodes(), lw.num_nodes() - 1);
        // six pin arcs of v0 swapped for six clique arcs
        assert_eq!(red.num_arcs(), lw.num_arcs());
    }

    #[test]
    fn degree_four_vertex_retained() {
        let nets = vec![vec![0, 1, 2], vec![0, 2, 3], vec![0, 3, 4], vec![0, 4, 1]];
        let h = Hypergraph::new(5, &nets).unwrap();
        let red = build_reduced(&whole(&h));
        assert!(!red.is_removed(0));
    }

    #[test]
    fn finite_arcs_belong_to_exactly_one_net() {
        let s = whole(&h0());
        for net in [build_lawler(&s), build_liu_wong(&s), build_reduced(&s)] {
            let finite: Vec<&Arc> = net.arcs().iter().filter(|a| !a.capacity.is_infinite()).collect();
            let expected: usize = (0..3).map(|e| if net.is_direct(e) { 2 } else if net.bridge_in(e).is_some() { 1 } else { 0 }).sum();
            assert_eq!(finite.len(), expected);
        }
    }

    #[test]
    fn options_override_representation() {
        let h = h0();
        let s = whole(&h);
        let nets = [NetRepresentation::Bridged, NetRepresentation::Auto, NetRepresentation::Omitted];
        let keep = [false, false, false, true];
        let net = build_network(&s, NetworkVariant::Reduced, BuildOptions { keep: Some(&keep), nets: Some(&nets) });
        assert!(net.bridge_in(0).is_some());
        assert!(net.bridge_in(2).is_none() && !net.is_direct(2));
        assert!(!net.is_removed(3));
        // v0: e1 bridged, e3 omitted → degree 1, removable
        assert!(net.is_removed(0));
    }
}
