//! Flow network sizes on a corridor around a bipartition.

use std::collections::VecDeque;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use hyperflow_core::multilevel::{partition, PartitionerConfig};
use hyperflow_core::network::{build_network, BuildOptions};
use hyperflow_core::subhypergraph::induced_subhypergraph;
use hyperflow_core::{FlowModel, FlowProblem, Hypergraph, NetworkVariant, NoClock, Partition, VertexId};

pub const HEADER: [&str; 8] =
    ["instance", "variant", "corridor", "nodes", "arcs", "infinite_arcs", "problem_nodes", "problem_arcs"];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NetstatsRow {
    pub variant: &'static str,
    pub corridor: usize,
    pub nodes: usize,
    pub arcs: usize,
    pub infinite_arcs: usize,
    /// Size of the F_H flow problem, terminals included.
    pub problem_nodes: usize,
    pub problem_arcs: usize,
}

/// Bipartition from a flow-free multilevel run.
pub fn quick_bipartition(h: &Hypergraph, seed: u64) -> anyhow::Result<Partition> {
    let cfg = PartitionerConfig { flows: false, fm_passes: 4, initial_attempts: 4, ..Default::default() };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(partition(h, 2, 0.03, &cfg, &mut rng, &NoClock)?.partition)
}

/// BFS from the cut on both sides until `size` vertices are collected,
/// alternating between the blocks.
pub fn corridor_of_size(h: &Hypergraph, part: &Partition, size: usize, seed: u64) -> Vec<VertexId> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut seen = vec![false; h.num_vertices()];
    let mut queues = [VecDeque::new(), VecDeque::new()];
    let mut seeds: Vec<VertexId> = (0..h.num_nets())
        .filter(|&e| part.connectivity(e) > 1)
        .flat_map(|e| h.pins(e).iter().copied())
        .collect();
    seeds.sort_unstable();
    seeds.dedup();
    seeds.shuffle(&mut rng);
    for v in seeds {
        seen[v] = true;
        queues[part.block(v)].push_back(v);
    }
    let mut out = Vec::with_capacity(size);
    let mut side = 0;
    while out.len() < size && (!queues[0].is_empty() || !queues[1].is_empty()) {
        if queues[side].is_empty() {
            side ^= 1;
        }
        let v = queues[side].pop_front().expect("non-empty queue");
        out.push(v);
        for &e in h.nets_of(v) {
            for &u in h.pins(e) {
                if !seen[u] && part.block(u) == side {
                    seen[u] = true;
                    queues[side].push_back(u);
                }
            }
        }
        side ^= 1;
    }
    out
}

/// One row per network configuration for the corridor `members`.
pub fn netstats(h: &Hypergraph, part: &Partition, members: &[VertexId]) -> anyhow::Result<Vec<NetstatsRow>> {
    let sub = induced_subhypergraph(h, part, members, 0, 1)?;
    let configs = [
        ("lawler", NetworkVariant::Lawler, false),
        ("liu_wong", NetworkVariant::LiuWong, false),
        ("reduced", NetworkVariant::Reduced, false),
        ("reduced+single_pin", NetworkVariant::Reduced, true),
    ];
    let mut rows = Vec::new();
    for (name, variant, single_pin) in configs {
        let plain = build_network(&sub, variant, BuildOptions::default()).stats();
        let problem = FlowProblem::build(&sub, FlowModel::Hypergraph, variant, single_pin)?.stats();
        rows.push(NetstatsRow {
            variant: name,
            corridor: members.len(),
            nodes: plain.num_nodes,
            arcs: plain.num_arcs,
            infinite_arcs: plain.num_infinite_arcs,
            problem_nodes: problem.num_nodes,
            problem_arcs: problem.num_arcs,
        });
    }
    Ok(rows)
}

pub fn write_rows<W: std::io::Write>(out: W, instance: &str, rows: &[NetstatsRow]) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(HEADER)?;
    for r in rows {
        w.write_record([
            instance.to_string(),
            r.variant.to_string(),
            r.corridor.to_string(),
            r.nodes.to_string(),
            r.arcs.to_string(),
            r.infinite_arcs.to_string(),
            r.problem_nodes.to_string(),
            r.problem_arcs.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}
