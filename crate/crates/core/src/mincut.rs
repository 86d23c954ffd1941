//! Turning a maximum flow into vertex bipartitions.
//!
//! Every (s,t)-min-cut is a closed set of the residual network that contains
//! s and not t. Contracting the strongly connected components of the
//! residual network gives a DAG whose closed sets are exactly these cuts.
//! The most balanced minimum cut heuristic sweeps the DAG in reverse
//! topological order, growing a closed set from the source component, and
//! keeps the most balanced cut it passes.

use alloc::vec;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::hypergraph::Weight;
use crate::maxflow::FlowState;
use crate::network::{NodeId, NodeKind};
use crate::partition::Partition;
use crate::problem::FlowProblem;

/// Source-side flag per vertex of H_B, from residual reachability.
///
/// Present vertices are on the source side iff their node is reachable;
/// eliminated vertices iff the e″ node of an incident net is reachable.
pub fn extract_bipartition(problem: &FlowProblem<'_>, flow: &FlowState) -> Vec<bool> {
    let reachable = flow.source_reachable();
    debug_assert!(!reachable[flow.sink()], "flow is not maximal");
    problem.assignment(|node| reachable[node])
}

/// Picard-Queyranne DAG: strongly connected components of the residual
/// network and the arcs between them.
#[derive(Debug, Clone)]
pub struct PqDag {
    component: Vec<usize>,
    members: Vec<Vec<NodeId>>,
    successors: Vec<Vec<usize>>,
    source_comp: usize,
    sink_comp: usize,
}

impl PqDag {
    pub fn num_components(&self) -> usize {
        self.members.len()
    }

    pub fn component_of(&self, node: NodeId) -> usize {
        self.component[node]
    }

    pub fn members(&self, c: usize) -> &[NodeId] {
        &self.members[c]
    }

    pub fn successors(&self, c: usize) -> &[usize] {
        &self.successors[c]
    }

    pub fn source_component(&self) -> usize {
        self.source_comp
    }

    pub fn sink_component(&self) -> usize {
        self.sink_comp
    }

    /// Whether no DAG arc leaves the component set.
    pub fn is_closed(&self, set: &[bool]) -> bool {
        (0..self.num_components()).all(|c| !set[c] || self.successors[c].iter().all(|&d| set[d]))
    }

    pub fn is_acyclic(&self) -> bool {
        // Kahn's algorithm
        let n = self.num_components();
        let mut indegree = vec![0usize; n];
        for c in 0..n {
            for &d in &self.successors[c] {
                indegree[d] += 1;
            }
        }
        let mut stack: Vec<usize> = (0..n).filter(|&c| indegree[c] == 0).collect();
        let mut seen = 0;
        while let Some(c) = stack.pop() {
            seen += 1;
            for &d in &self.successors[c] {
                indegree[d] -= 1;
                if indegree[d] == 0 {
                    stack.push(d);
                }
            }
        }
        seen == n
    }

    fn closure(&self, start: usize, forward: bool) -> Vec<bool> {
        let n = self.num_components();
        let mut seen = vec![false; n];
        let predecessors = if forward { None } else { Some(self.predecessors()) };
        let mut stack = vec![start];
        seen[start] = true;
        while let Some(c) = stack.pop() {
            let next = match &predecessors {
                None => &self.successors[c],
                Some(p) => &p[c],
            };
            for &d in next {
                if !seen[d] {
                    seen[d] = true;
                    stack.push(d);
                }
            }
        }
        seen
    }

    fn predecessors(&self) -> Vec<Vec<usize>> {
        let mut p = vec![Vec::new(); self.num_components()];
        for c in 0..self.num_components() {
            for &d in &self.successors[c] {
                p[d].push(c);
            }
        }
        p
    }

    /// Post-order of a DFS with randomized root and successor order; a
    /// reverse topological order of the DAG.
    pub fn random_reverse_topological_order<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<usize> {
        let n = self.num_components();
        let mut roots: Vec<usize> = (0..n).collect();
        roots.shuffle(rng);
        let mut visited = vec![false; n];
        let mut order = Vec::with_capacity(n);
        // (component, shuffled successors, next index)
        let mut stack: Vec<(usize, Vec<usize>, usize)> = Vec::new();
        for root in roots {
            if visited[root] {
                continue;
            }
            visited[root] = true;
            let mut succ = self.successors[root].clone();
            succ.shuffle(rng);
            stack.push((root, succ, 0));
            while let Some((c, succ, next)) = stack.last_mut() {
                if *next < succ.len() {
                    let d = succ[*next];
                    *next += 1;
                    if !visited[d] {
                        visited[d] = true;
                        let mut s = self.successors[d].clone();
                        s.shuffle(rng);
                        stack.push((d, s, 0));
                    }
                } else {
                    order.push(*c);
                    stack.pop();
                }
            }
        }
        order
    }
}

/// Contracts the strongly connected components of the residual network.
pub fn build_pq_dag(flow: &FlowState) -> PqDag {
    let component = tarjan_scc(flow);
    let count = component.iter().copied().max().map_or(0, |c| c + 1);
    let mut members = vec![Vec::new(); count];
    for (node, &c) in component.iter().enumerate() {
        members[c].push(node);
    }
    let mut successors = vec![Vec::new(); count];
    for u in 0..flow.num_nodes() {
        for v in flow.residual_successors(u) {
            if component[u] != component[v] {
                successors[component[u]].push(component[v]);
            }
        }
    }
    for s in &mut successors {
        s.sort_unstable();
        s.dedup();
    }
    PqDag {
        source_comp: component[flow.source()],
        sink_comp: component[flow.sink()],
        component,
        members,
        successors,
    }
}

/// Iterative Tarjan over the residual network; returns the component of
/// every node.
fn tarjan_scc(flow: &FlowState) -> Vec<usize> {
    const UNSEEN: usize = usize::MAX;
    let n = flow.num_nodes();
    let succ: Vec<Vec<NodeId>> = (0..n).map(|u| flow.residual_successors(u).collect()).collect();
    let mut index = vec![UNSEEN; n];
    let mut low = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut component = vec![UNSEEN; n];
    let mut stack = Vec::new();
    let mut call: Vec<(NodeId, usize)> = Vec::new();
    let mut next_index = 0;
    let mut next_comp = 0;

    for root in 0..n {
        if index[root] != UNSEEN {
            continue;
        }
        call.push((root, 0));
        index[root] = next_index;
        low[root] = next_index;
        next_index += 1;
        stack.push(root);
        on_stack[root] = true;
        while let Some(&mut (u, ref mut i)) = call.last_mut() {
            if *i < succ[u].len() {
                let v = succ[u][*i];
                *i += 1;
                if index[v] == UNSEEN {
                    index[v] = next_index;
                    low[v] = next_index;
                    next_index += 1;
                    stack.push(v);
                    on_stack[v] = true;
                    call.push((v, 0));
                } else if on_stack[v] {
                    low[u] = low[u].min(index[v]);
                }
            } else {
                call.pop();
                if let Some(&(parent, _)) = call.last() {
                    low[parent] = low[parent].min(low[u]);
                }
                if low[u] == index[u] {
                    loop {
                        let w = stack.pop().unwrap();
                        on_stack[w] = false;
                        component[w] = next_comp;
                        if w == u {
                            break;
                        }
                    }
                    next_comp += 1;
                }
            }
        }
    }
    component
}

/// One candidate cut found by the sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
struct Score {
    empties_block: bool,
    max_weight: Weight,
}

/// Weight bookkeeping for evaluating corridor reassignments against the
/// full k-way partition.
struct BalanceFrame {
    base_first: Weight,
    base_second: Weight,
    count_first: usize,
    count_second: usize,
    corridor_weight: Weight,
    corridor_count: usize,
    max_other: Weight,
}

impl BalanceFrame {
    fn new(problem: &FlowProblem<'_>, part: &Partition) -> Self {
        let sub = problem.sub();
        let Some((i, j)) = sub.pair() else {
            // not a corridor: balance of the bipartition of H_B alone
            return Self {
                base_first: 0,
                base_second: 0,
                count_first: 0,
                count_second: 0,
                corridor_weight: sub.hypergraph().total_weight(),
                corridor_count: sub.num_vertices(),
                max_other: 0,
            };
        };
        let (mut in_i, mut in_j, mut cnt_i, mut cnt_j) = (0, 0, 0, 0);
        for v in 0..sub.num_vertices() {
            let w = sub.hypergraph().vertex_weight(v);
            if sub.in_first(v) {
                in_i += w;
                cnt_i += 1;
            } else {
                in_j += w;
                cnt_j += 1;
            }
        }
        let max_other = (0..part.k())
            .filter(|&b| b != i && b != j)
            .map(|b| part.block_weight(b))
            .max()
            .unwrap_or(0);
        Self {
            base_first: part.block_weight(i) - in_i,
            base_second: part.block_weight(j) - in_j,
            count_first: part.block_size(i) - cnt_i,
            count_second: part.block_size(j) - cnt_j,
            corridor_weight: in_i + in_j,
            corridor_count: cnt_i + cnt_j,
            max_other,
        }
    }

    fn score(&self, source_weight: Weight, source_count: usize) -> Score {
        let wi = self.base_first + source_weight;
        let wj = self.base_second + (self.corridor_weight - source_weight);
        let ci = self.count_first + source_count;
        let cj = self.count_second + (self.corridor_count - source_count);
        Score {
            empties_block: ci == 0 || cj == 0,
            max_weight: wi.max(wj).max(self.max_other),
        }
    }
}

/// Most balanced minimum cut: `reps` randomized sweeps over the closed sets
/// of the DAG; returns the source-side flags of the best cut found.
///
/// Balance is measured on the full k-way partition with the corridor
/// reassigned; `part` is ignored when the problem is not built on a block
/// pair. Ties keep the earliest candidate.
pub fn most_balanced_min_cut<R: Rng + ?Sized>(
    dag: &PqDag,
    problem: &FlowProblem<'_>,
    flow: &FlowState,
    part: &Partition,
    reps: usize,
    rng: &mut R,
) -> Vec<bool> {
    let sub = problem.sub();
    let h = sub.hypergraph();
    let net = problem.network();
    let frame = BalanceFrame::new(problem, part);
    let n_comp = dag.num_components();

    // free vertices whose node sits in each component
    let mut present: Vec<Vec<usize>> = vec![Vec::new(); n_comp];
    // eliminated free vertices adjacent to each component via an e″ node
    let mut via_out: Vec<Vec<usize>> = vec![Vec::new(); n_comp];
    for node in 0..net.num_nodes() {
        match net.node_kind(node) {
            NodeKind::Vertex(v) if problem.forced_side(v).is_none() => {
                present[dag.component_of(node)].push(v);
            }
            NodeKind::BridgeOut(e) => {
                for &v in h.pins(e) {
                    if net.is_removed(v) && problem.forced_side(v).is_none() {
                        via_out[dag.component_of(node)].push(v);
                    }
                }
            }
            _ => {}
        }
    }

    let reachable = dag.closure(dag.source_component(), true);
    let reaches_sink = dag.closure(dag.sink_component(), false);
    let initial = problem.assignment(|node| reachable[dag.component_of(node)]);
    let mut initial_hits = vec![0u32; sub.num_vertices()];
    for c in (0..n_comp).filter(|&c| reachable[c]) {
        for &v in &via_out[c] {
            initial_hits[v] += 1;
        }
    }
    let initial_weight: Weight = (0..sub.num_vertices())
        .filter(|&v| initial[v])
        .map(|v| h.vertex_weight(v))
        .sum();
    let initial_count = initial.iter().filter(|&&s| s).count();

    let mut best = (frame.score(initial_weight, initial_count), Vec::new(), 0usize);
    for _ in 0..reps.max(1) {
        let order: Vec<usize> = dag
            .random_reverse_topological_order(rng)
            .into_iter()
            .filter(|&c| !reachable[c] && !reaches_sink[c])
            .collect();
        let mut hits = initial_hits.clone();
        let mut weight = initial_weight;
        let mut count = initial_count;
        for (step, &c) in order.iter().enumerate() {
            for &v in &present[c] {
                weight += h.vertex_weight(v);
                count += 1;
            }
            for &v in &via_out[c] {
                hits[v] += 1;
                if hits[v] == 1 {
                    weight += h.vertex_weight(v);
                    count += 1;
                }
            }
            let score = frame.score(weight, count);
            if score < best.0 {
                best = (score, order.clone(), step + 1);
            }
        }
    }

    let (_, order, prefix) = best;
    let mut in_set = reachable;
    for &c in &order[..prefix] {
        in_set[c] = true;
    }
    let side = problem.assignment(|node| in_set[dag.component_of(node)]);
    debug_assert_eq!(problem.local_cut(&side), flow.value());
    side
}

/// Capacity of the arcs leaving a source-side node set.
pub fn cut_capacity(problem: &FlowProblem<'_>, flow: &FlowState, in_source: &[bool]) -> Weight {
    problem
        .network()
        .arcs()
        .iter()
        .filter(|a| in_source[a.from] && !in_source[a.to])
        .map(|a| a.capacity.effective(flow.infinity()))
        .sum()
}
