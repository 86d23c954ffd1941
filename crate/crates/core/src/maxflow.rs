//! Exact maximum flow by blocking flows on level graphs (Dinic).
//!
//! Infinite capacities are replaced by one more than the sum of all finite
//! capacities. No flow can reach that value, so infinite arcs are never
//! saturated and never part of a minimum cut.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::hypergraph::Weight;
use crate::network::{FlowNetwork, NodeId};
use crate::problem::FlowProblem;

/// A maximum flow together with its residual network.
///
/// Arc `i` of the input network owns residual edges `2i` (forward) and
/// `2i + 1` (backward).
#[derive(Debug, Clone)]
pub struct FlowState {
    source: NodeId,
    sink: NodeId,
    value: Weight,
    infinity: Weight,
    offsets: Vec<usize>,
    adjacency: Vec<usize>,
    to: Vec<NodeId>,
    residual: Vec<Weight>,
}

impl FlowState {
    /// |f|.
    pub fn value(&self) -> Weight {
        self.value
    }

    /// Stand-in value used for infinite capacities.
    pub fn infinity(&self) -> Weight {
        self.infinity
    }

    pub fn source(&self) -> NodeId {
        self.source
    }

    pub fn sink(&self) -> NodeId {
        self.sink
    }

    pub fn num_nodes(&self) -> usize {
        self.offsets.len() - 1
    }

    /// Flow on input arc `i`.
    pub fn arc_flow(&self, i: usize) -> Weight {
        self.residual[2 * i + 1]
    }

    /// Residual capacity of input arc `i` in its own direction.
    pub fn arc_residual(&self, i: usize) -> Weight {
        self.residual[2 * i]
    }

    /// Heads of residual edges with positive capacity leaving `u`.
    pub fn residual_successors(&self, u: NodeId) -> impl Iterator<Item = NodeId> + '_ {
        self.adjacency[self.offsets[u]..self.offsets[u + 1]]
            .iter()
            .filter(|&&e| self.residual[e] > 0)
            .map(|&e| self.to[e])
    }

    /// Tails of residual edges with positive capacity entering `v`.
    pub fn residual_predecessors(&self, v: NodeId) -> impl Iterator<Item = NodeId> + '_ {
        self.adjacency[self.offsets[v]..self.offsets[v + 1]]
            .iter()
            .filter(|&&e| self.residual[e ^ 1] > 0)
            .map(|&e| self.to[e])
    }

    /// Nodes reachable from the source in the residual network.
    pub fn source_reachable(&self) -> Vec<bool> {
        self.search(self.source, true)
    }

    /// Nodes from which the sink is reachable in the residual network.
    pub fn sink_reaching(&self) -> Vec<bool> {
        self.search(self.sink, false)
    }

    fn search(&self, start: NodeId, forward: bool) -> Vec<bool> {
        let mut seen = vec![false; self.num_nodes()];
        let mut queue = VecDeque::new();
        seen[start] = true;
        queue.push_back(start);
        while let Some(u) = queue.pop_front() {
            for &e in &self.adjacency[self.offsets[u]..self.offsets[u + 1]] {
                let cap = if forward { self.residual[e] } else { self.residual[e ^ 1] };
                let v = self.to[e];
                if cap > 0 && !seen[v] {
                    seen[v] = true;
                    queue.push_back(v);
                }
            }
        }
        seen
    }
}

/// Maximum flow of a flow problem.
pub fn max_flow(problem: &FlowProblem<'_>) -> Result<FlowState> {
    let mut sinks = problem.sink_targets().to_vec();
    sinks.sort_unstable();
    for node in problem.source_targets() {
        if sinks.binary_search(node).is_ok() {
            return Err(Error::SourceSinkOverlap(*node));
        }
    }
    max_flow_network(problem.network(), problem.source(), problem.sink())
}

/// Maximum flow between two nodes of a network.
pub fn max_flow_network(network: &FlowNetwork, source: NodeId, sink: NodeId) -> Result<FlowState> {
    if source == sink {
        return Err(Error::SourceSinkOverlap(source));
    }
    let n = network.num_nodes();
    let arcs = network.arcs();
    let infinity = network.finite_capacity() + 1;

    let mut degree = vec![0usize; n + 1];
    for a in arcs {
        degree[a.from] += 1;
        degree[a.to] += 1;
    }
    let mut offsets = vec![0usize; n + 1];
    for u in 0..n {
        offsets[u + 1] = offsets[u] + degree[u];
    }
    let mut fill = offsets.clone();
    let mut adjacency = vec![0usize; 2 * arcs.len()];
    let mut to = vec![0usize; 2 * arcs.len()];
    let mut residual = vec![0; 2 * arcs.len()];
    for (i, a) in arcs.iter().enumerate() {
        to[2 * i] = a.to;
        to[2 * i + 1] = a.from;
        residual[2 * i] = a.capacity.effective(infinity);
        adjacency[fill[a.from]] = 2 * i;
        fill[a.from] += 1;
        adjacency[fill[a.to]] = 2 * i + 1;
        fill[a.to] += 1;
    }

    let mut state = FlowState {
        source,
        sink,
        value: 0,
        infinity,
        offsets,
        adjacency,
        to,
        residual,
    };
    let mut level = vec![u32::MAX; n];
    let mut current = vec![0usize; n];
    let mut queue = VecDeque::new();
    while bfs_levels(&state, &mut level, &mut queue) {
        current.copy_from_slice(&state.offsets[..n]);
        state.value += blocking_flow(&mut state, &mut level, &mut current);
        if state.value >= infinity {
            return Err(Error::Config("source and sink are joined by an infinite path"));
        }
    }
    Ok(state)
}

fn bfs_levels(state: &FlowState, level: &mut [u32], queue: &mut VecDeque<NodeId>) -> bool {
    level.fill(u32::MAX);
    queue.clear();
    level[state.source] = 0;
    queue.push_back(state.source);
    while let Some(u) = queue.pop_front() {
        for &e in &state.adjacency[state.offsets[u]..state.offsets[u + 1]] {
            let v = state.to[e];
            if state.residual[e] > 0 && level[v] == u32::MAX {
                level[v] = level[u] + 1;
                queue.push_back(v);
            }
        }
    }
    level[state.sink] != u32::MAX
}

fn blocking_flow(state: &mut FlowState, level: &mut [u32], current: &mut [usize]) -> Weight {
    let (s, t) = (state.source, state.sink);
    let mut total = 0;
    let mut path: Vec<usize> = Vec::new();
    let mut u = s;
    loop {
        if u == t {
            let bottleneck = path.iter().map(|&e| state.residual[e]).min().unwrap_or(0);
            for &e in &path {
                state.residual[e] -= bottleneck;
                state.residual[e ^ 1] += bottleneck;
            }
            total += bottleneck;
            // resume from the tail of the first saturated edge
            let cut = path.iter().position(|&e| state.residual[e] == 0).unwrap_or(0);
            path.truncate(cut);
            u = path.last().map_or(s, |&e| state.to[e]);
            continue;
        }
        let end = state.offsets[u + 1];
        let mut advanced = false;
        while current[u] < end {
            let e = state.adjacency[current[u]];
            let v = state.to[e];
            if state.residual[e] > 0 && level[v] == level[u] + 1 {
                path.push(e);
                u = v;
                advanced = true;
                break;
            }
            current[u] += 1;
        }
        if !advanced {
            // dead end: drop u from the level graph and retreat
            level[u] = u32::MAX;
            match path.pop() {
                None => return total,
                Some(e) => {
                    u = state.to[e ^ 1];
                    current[u] += 1;
                }
            }
        }
    }
}
