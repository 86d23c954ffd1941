use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

pub type VertexId = usize;
pub type NetId = usize;
/// Vertex and net weights. Integer so that balance checks are exact.
pub type Weight = u64;

/// An undirected hypergraph with positive vertex and net weights.
///
/// Pins are stored net-major and incidences vertex-major, both in CSR form.
/// The pin order within a net is the order given at construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hypergraph {
    net_offsets: Vec<usize>,
    pins: Vec<VertexId>,
    vertex_offsets: Vec<usize>,
    incident: Vec<NetId>,
    vertex_weights: Vec<Weight>,
    net_weights: Vec<Weight>,
    total_weight: Weight,
}

impl Hypergraph {
    /// Unit-weight hypergraph.
    pub fn new(num_vertices: usize, nets: &[Vec<VertexId>]) -> Result<Self> {
        Self::with_weights(num_vertices, nets, None, None)
    }

    pub fn with_weights(
        num_vertices: usize,
        nets: &[Vec<VertexId>],
        net_weights: Option<Vec<Weight>>,
        vertex_weights: Option<Vec<Weight>>,
    ) -> Result<Self> {
        let net_weights = match net_weights {
            Some(w) => {
                check_weights(&w, nets.len(), "net")?;
                w
            }
            None => vec![1; nets.len()],
        };
        let vertex_weights = match vertex_weights {
            Some(w) => {
                check_weights(&w, num_vertices, "vertex")?;
                w
            }
            None => vec![1; num_vertices],
        };

        let mut net_offsets = Vec::with_capacity(nets.len() + 1);
        let mut pins = Vec::with_capacity(nets.iter().map(Vec::len).sum());
        let mut degree = vec![0usize; num_vertices];
        // last net in which each vertex was seen, to detect duplicates
        let mut seen = vec![usize::MAX; num_vertices];
        net_offsets.push(0);
        for (e, net) in nets.iter().enumerate() {
            if net.is_empty() {
                return Err(Error::EmptyNet(e));
            }
            for &v in net {
                if v >= num_vertices {
                    return Err(Error::InvalidVertex(v));
                }
                if seen[v] == e {
                    return Err(Error::DuplicatePin { net: e, vertex: v });
                }
                seen[v] = e;
                degree[v] += 1;
                pins.push(v);
            }
            net_offsets.push(pins.len());
        }

        let mut vertex_offsets = Vec::with_capacity(num_vertices + 1);
        vertex_offsets.push(0);
        for d in &degree {
            vertex_offsets.push(vertex_offsets.last().unwrap() + d);
        }
        let mut fill = vertex_offsets[..num_vertices].to_vec();
        let mut incident = vec![0; pins.len()];
        for e in 0..nets.len() {
            for &v in &pins[net_offsets[e]..net_offsets[e + 1]] {
                incident[fill[v]] = e;
                fill[v] += 1;
            }
        }

        let total_weight = vertex_weights.iter().sum();
        Ok(Self {
            net_offsets,
            pins,
            vertex_offsets,
            incident,
            vertex_weights,
            net_weights,
            total_weight,
        })
    }

    pub fn num_vertices(&self) -> usize {
        self.vertex_weights.len()
    }

    pub fn num_nets(&self) -> usize {
        self.net_weights.len()
    }

    pub fn num_pins(&self) -> usize {
        self.pins.len()
    }

    #[inline]
    pub fn pins(&self, e: NetId) -> &[VertexId] {
        &self.pins[self.net_offsets[e]..self.net_offsets[e + 1]]
    }

    /// Incident nets I(v).
    #[inline]
    pub fn nets_of(&self, v: VertexId) -> &[NetId] {
        &self.incident[self.vertex_offsets[v]..self.vertex_offsets[v + 1]]
    }

    #[inline]
    pub fn degree(&self, v: VertexId) -> usize {
        self.vertex_offsets[v + 1] - self.vertex_offsets[v]
    }

    #[inline]
    pub fn net_size(&self, e: NetId) -> usize {
        self.net_offsets[e + 1] - self.net_offsets[e]
    }

    #[inline]
    pub fn vertex_weight(&self, v: VertexId) -> Weight {
        self.vertex_weights[v]
    }

    #[inline]
    pub fn net_weight(&self, e: NetId) -> Weight {
        self.net_weights[e]
    }

    pub fn vertex_weights(&self) -> &[Weight] {
        &self.vertex_weights
    }

    pub fn net_weights(&self) -> &[Weight] {
        &self.net_weights
    }

    /// c(V).
    pub fn total_weight(&self) -> Weight {
        self.total_weight
    }

    pub fn max_vertex_weight(&self) -> Weight {
        self.vertex_weights.iter().copied().max().unwrap_or(0)
    }

    pub fn has_unit_net_weights(&self) -> bool {
        self.net_weights.iter().all(|&w| w == 1)
    }

    pub fn has_unit_vertex_weights(&self) -> bool {
        self.vertex_weights.iter().all(|&w| w == 1)
    }

    pub fn nets(&self) -> impl Iterator<Item = &[VertexId]> + '_ {
        (0..self.num_nets()).map(move |e| self.pins(e))
    }

    /// Checks that the pin lists and incidence lists describe the same
    /// incidence relation.
    pub fn is_consistent(&self) -> bool {
        if self.incident.len() != self.pins.len() {
            return false;
        }
        for e in 0..self.num_nets() {
            for &v in self.pins(e) {
                if !self.nets_of(v).contains(&e) {
                    return false;
                }
            }
        }
        for v in 0..self.num_vertices() {
            for &e in self.nets_of(v) {
                if !self.pins(e).contains(&v) {
                    return false;
                }
            }
        }
        true
    }
}

fn check_weights(w: &[Weight], expected: usize, what: &'static str) -> Result<()> {
    if w.len() != expected {
        return Err(Error::LengthMismatch {
            expected,
            actual: w.len(),
        });
    }
    if let Some(index) = w.iter().position(|&x| x == 0) {
        return Err(Error::ZeroWeight { what, index });
    }
    Ok(())
}
