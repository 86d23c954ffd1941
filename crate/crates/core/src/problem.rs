//! Source/sink attachment on top of a [`FlowNetwork`].
//!
//! Two models are provided for a corridor subhypergraph H_B of a block pair
//! (V_i, V_j):
//!
//! - [`FlowModel::Graph`] (F_G) connects the source to every internal border
//!   vertex of V_i and every internal border vertex of V_j to the sink. These
//!   vertices are locked in their block.
//! - [`FlowModel::Hypergraph`] (F_H) leaves all vertices of H_B free and
//!   attaches the terminals to the bridging nodes of border nets: s → e′ if
//!   the net has external pins in V_i, e″ → t if it has external pins in V_j.
//!   Border nets with a single pin inside B can be modeled with one bridging
//!   node: s → e′ → v with c(e′, v) = ω(e), or v → e″ → t.
//!
//! In both models the capacity of a minimum (s,t)-cut equals the minimum of
//! [`FlowProblem::local_cut`] over all vertex assignments the model allows.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::hypergraph::{NetId, VertexId, Weight};
use crate::network::{
    build_network, BuildOptions, Capacity, FlowNetwork, NetRepresentation, NetworkStats, NetworkVariant,
    NodeId, NodeKind,
};
use crate::subhypergraph::SubHypergraph;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FlowModel {
    /// F_G: terminals attached to internal border vertices.
    Graph,
    /// F_H: terminals attached to bridging nodes of border nets.
    Hypergraph,
}

impl FlowModel {
    pub fn name(self) -> &'static str {
        match self {
            FlowModel::Graph => "graph",
            FlowModel::Hypergraph => "hypergraph",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Source,
    Sink,
}

/// A flow network with a single source and sink node plus everything
/// needed to translate node sets back into vertex assignments of H_B.
#[derive(Debug, Clone)]
pub struct FlowProblem<'a> {
    sub: &'a SubHypergraph,
    network: FlowNetwork,
    source: NodeId,
    sink: NodeId,
    model: Option<FlowModel>,
    forced: Vec<Option<Side>>,
    /// Whether each local net is tied to the source / sink side by external pins.
    terminal: Vec<(bool, bool)>,
    /// Terminal arcs that carry infinite capacity, by endpoint.
    source_targets: Vec<NodeId>,
    sink_targets: Vec<NodeId>,
}

impl<'a> FlowProblem<'a> {
    /// Flow problem for the corridor `sub` of a block pair.
    ///
    /// `single_pin_modeling` selects the one-bridging-node representation of
    /// border nets with a single pin inside the corridor (F_H only).
    pub fn build(
        sub: &'a SubHypergraph,
        model: FlowModel,
        variant: NetworkVariant,
        single_pin_modeling: bool,
    ) -> Result<Self> {
        if sub.pair().is_none() {
            return Err(Error::Config("flow problem needs a subhypergraph of a block pair"));
        }
        match model {
            FlowModel::Graph => Ok(Self::graph_model(sub, variant)),
            FlowModel::Hypergraph => Ok(Self::hypergraph_model(sub, variant, single_pin_modeling)),
        }
    }

    fn empty(sub: &'a SubHypergraph, network: FlowNetwork, model: Option<FlowModel>) -> Self {
        let mut network = network;
        let source = network.add_node(NodeKind::Source);
        let sink = network.add_node(NodeKind::Sink);
        Self {
            sub,
            network,
            source,
            sink,
            model,
            forced: vec![None; sub.num_vertices()],
            terminal: vec![(false, false); sub.num_nets()],
            source_targets: Vec::new(),
            sink_targets: Vec::new(),
        }
    }

    fn attach_source(&mut self, node: NodeId, capacity: Capacity) {
        self.network.add_arc(self.source, node, capacity);
        if capacity.is_infinite() {
            self.source_targets.push(node);
        }
    }

    fn attach_sink(&mut self, node: NodeId, capacity: Capacity) {
        self.network.add_arc(node, self.sink, capacity);
        if capacity.is_infinite() {
            self.sink_targets.push(node);
        }
    }

    fn graph_model(sub: &'a SubHypergraph, variant: NetworkVariant) -> Self {
        let keep: Vec<bool> = (0..sub.num_vertices()).map(|v| sub.is_internal_border(v)).collect();
        let network = build_network(sub, variant, BuildOptions { keep: Some(&keep), nets: None });
        let mut p = Self::empty(sub, network, Some(FlowModel::Graph));
        for v in 0..sub.num_vertices() {
            if !keep[v] {
                continue;
            }
            let node = p.network.vertex_node(v).expect("border vertices are kept");
            if sub.in_first(v) {
                p.attach_source(node, Capacity::Infinite);
                p.forced[v] = Some(Side::Source);
            } else {
                p.attach_sink(node, Capacity::Infinite);
                p.forced[v] = Some(Side::Sink);
            }
        }
        p
    }

    fn hypergraph_model(sub: &'a SubHypergraph, variant: NetworkVariant, single_pin_modeling: bool) -> Self {
        let h = sub.hypergraph();
        let mut nets = vec![NetRepresentation::Auto; sub.num_nets()];
        let mut keep = vec![false; sub.num_vertices()];
        let mut terminal = vec![(false, false); sub.num_nets()];
        for e in 0..sub.num_nets() {
            if !sub.is_border_net(e) {
                continue;
            }
            let ext = sub.external_pins(e);
            let t = (ext.first > 0, ext.second > 0);
            terminal[e] = t;
            if !(t.0 || t.1) {
                continue;
            }
            if h.net_size(e) == 1 {
                // the pin keeps its node in both representations, so the two
                // variants differ only in how the net itself is modeled
                keep[h.pins(e)[0]] = true;
                nets[e] = if single_pin_modeling {
                    NetRepresentation::Omitted
                } else {
                    NetRepresentation::Bridged
                };
            } else {
                nets[e] = NetRepresentation::Bridged;
            }
        }
        let network = build_network(sub, variant, BuildOptions { keep: Some(&keep), nets: Some(&nets) });
        let mut p = Self::empty(sub, network, Some(FlowModel::Hypergraph));
        p.terminal = terminal;

        for e in 0..sub.num_nets() {
            let (src, snk) = p.terminal[e];
            if !(src || snk) {
                continue;
            }
            let w = Capacity::Finite(h.net_weight(e));
            if nets[e] == NetRepresentation::Omitted {
                let pin = p.network.vertex_node(h.pins(e)[0]).expect("kept");
                match (src, snk) {
                    (true, false) => {
                        let ein = p.network.add_node(NodeKind::BridgeIn(e));
                        p.network.set_bridge_in(e, ein);
                        p.attach_source(ein, Capacity::Infinite);
                        p.network.add_arc(ein, pin, w);
                    }
                    (false, true) => {
                        let eout = p.network.add_node(NodeKind::BridgeOut(e));
                        p.network.set_bridge_out(e, eout);
                        p.network.add_arc(pin, eout, w);
                        p.attach_sink(eout, Capacity::Infinite);
                    }
                    _ => {
                        // cut no matter where the pin goes
                        let ein = p.network.add_node(NodeKind::BridgeIn(e));
                        let eout = p.network.add_node(NodeKind::BridgeOut(e));
                        p.network.set_bridge_in(e, ein);
                        p.network.set_bridge_out(e, eout);
                        p.attach_source(ein, Capacity::Infinite);
                        p.network.add_arc(ein, eout, w);
                        p.attach_sink(eout, Capacity::Infinite);
                    }
                }
            } else {
                if src {
                    let ein = p.network.bridge_in(e).expect("bridged");
                    p.attach_source(ein, Capacity::Infinite);
                }
                if snk {
                    let eout = p.network.bridge_out(e).expect("bridged");
                    p.attach_sink(eout, Capacity::Infinite);
                }
            }
        }
        p
    }

    /// Minimum (s,t)-cut problem between two vertices of `sub`.
    ///
    /// If s or t were eliminated by the reduced network, the terminal is
    /// attached to the bridging nodes of its nets instead (multi-source /
    /// multi-sink).
    pub fn vertex_pair(sub: &'a SubHypergraph, variant: NetworkVariant, s: VertexId, t: VertexId) -> Result<Self> {
        let n = sub.num_vertices();
        if s >= n {
            return Err(Error::InvalidVertex(s));
        }
        if t >= n {
            return Err(Error::InvalidVertex(t));
        }
        if s == t {
            return Err(Error::SourceSinkOverlap(s));
        }
        let network = build_network(sub, variant, BuildOptions::default());
        let mut p = Self::empty(sub, network, None);
        let h = sub.hypergraph();
        match p.network.vertex_node(s) {
            Some(node) => p.attach_source(node, Capacity::Infinite),
            None => {
                for &e in h.nets_of(s) {
                    if let Some(ein) = p.network.bridge_in(e) {
                        p.attach_source(ein, Capacity::Infinite);
                    }
                }
            }
        }
        match p.network.vertex_node(t) {
            Some(node) => p.attach_sink(node, Capacity::Infinite),
            None => {
                for &e in h.nets_of(t) {
                    if let Some(eout) = p.network.bridge_out(e) {
                        p.attach_sink(eout, Capacity::Infinite);
                    }
                }
            }
        }
        p.forced[s] = Some(Side::Source);
        p.forced[t] = Some(Side::Sink);
        Ok(p)
    }

    pub fn sub(&self) -> &'a SubHypergraph {
        self.sub
    }

    pub fn network(&self) -> &FlowNetwork {
        &self.network
    }

    pub fn source(&self) -> NodeId {
        self.source
    }

    pub fn sink(&self) -> NodeId {
        self.sink
    }

    pub fn model(&self) -> Option<FlowModel> {
        self.model
    }

    /// Nodes attached to the source with infinite capacity.
    pub fn source_targets(&self) -> &[NodeId] {
        &self.source_targets
    }

    pub fn sink_targets(&self) -> &[NodeId] {
        &self.sink_targets
    }

    pub fn forced_side(&self, v: VertexId) -> Option<Side> {
        self.forced[v]
    }

    /// Whether the net is tied to the source / sink by pins outside B.
    pub fn terminal_sides(&self, e: NetId) -> (bool, bool) {
        self.terminal[e]
    }

    /// Size of the whole problem, terminals included.
    pub fn stats(&self) -> NetworkStats {
        self.network.stats()
    }

    /// Source-side flag per local vertex for the assignment the partition
    /// currently has.
    pub fn current_assignment(&self) -> Vec<bool> {
        (0..self.sub.num_vertices()).map(|v| self.sub.in_first(v)).collect()
    }

    /// Vertex assignment induced by a source-side node set.
    ///
    /// Present vertices follow their node; eliminated vertices are on the
    /// source side iff the e″ node of one of their nets is.
    pub fn assignment<F: Fn(NodeId) -> bool>(&self, in_source: F) -> Vec<bool> {
        let h = self.sub.hypergraph();
        (0..self.sub.num_vertices())
            .map(|v| match self.forced[v] {
                Some(side) => side == Side::Source,
                None => match self.network.vertex_node(v) {
                    Some(node) => in_source(node),
                    None => h
                        .nets_of(v)
                        .iter()
                        .any(|&e| self.network.bridge_out(e).is_some_and(&in_source)),
                },
            })
            .collect()
    }

    /// Weight of nets cut by a vertex assignment of H_B under this model,
    /// counting the terminal ties of border nets.
    pub fn local_cut(&self, source_side: &[bool]) -> Weight {
        let h = self.sub.hypergraph();
        let mut total = 0;
        for e in 0..h.num_nets() {
            let (mut src, mut snk) = self.terminal[e];
            for &v in h.pins(e) {
                if source_side[v] {
                    src = true;
                } else {
                    snk = true;
                }
            }
            if src && snk {
                total += h.net_weight(e);
            }
        }
        total
    }

    /// Whether an assignment respects the locked vertices.
    pub fn respects_forced(&self, source_side: &[bool]) -> bool {
        self.forced
            .iter()
            .zip(source_side)
            .all(|(f, &s)| f.is_none_or(|side| (side == Side::Source) == s))
    }
}
