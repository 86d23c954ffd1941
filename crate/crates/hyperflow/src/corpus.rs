//! Synthetic instance families and the fixed desk corpus used by the
//! benchmarks and acceptance tests.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use hyperflow_core::{Hypergraph, Weight};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Origin {
    Hypergraph,
    Graph,
}

#[derive(Debug, Clone)]
pub struct Instance {
    pub name: String,
    pub origin: Origin,
    pub hypergraph: Hypergraph,
}

fn dedup(mut pins: Vec<usize>) -> Vec<usize> {
    pins.sort_unstable();
    pins.dedup();
    pins
}

fn finish(n: usize, nets: Vec<Vec<usize>>, net_weights: Option<Vec<Weight>>, vertex_weights: Option<Vec<Weight>>) -> Hypergraph {
    let (nets, weights): (Vec<Vec<usize>>, Vec<Weight>) = match net_weights {
        Some(w) => nets.into_iter().zip(w).filter(|(p, _)| !p.is_empty()).unzip(),
        None => nets.into_iter().filter(|p| !p.is_empty()).map(|p| (p, 1)).unzip(),
    };
    Hypergraph::with_weights(n, &nets, Some(weights), vertex_weights).expect("generated nets are valid")
}

/// Uniform random nets with sizes in `sizes`.
pub fn random_uniform<R: Rng>(n: usize, m: usize, sizes: (usize, usize), rng: &mut R) -> Hypergraph {
    let nets = (0..m)
        .map(|_| {
            let s = rng.gen_range(sizes.0..=sizes.1).min(n);
            dedup((0..s).map(|_| rng.gen_range(0..n)).collect())
        })
        .collect();
    finish(n, nets, None, None)
}

/// Circuit-like: vertices on a grid, each net joins a few vertices in a small
/// window, plus a handful of longer nets.
pub fn geometric<R: Rng>(n: usize, m: usize, max_size: usize, rng: &mut R) -> Hypergraph {
    let w = (n as f64).sqrt().ceil() as usize;
    let at = |x: usize, y: usize| (y * w + x).min(n - 1);
    let nets = (0..m)
        .map(|_| {
            let (x, y) = (rng.gen_range(0..w), rng.gen_range(0..w));
            let size = if rng.gen_bool(0.6) { 2 } else { rng.gen_range(3..=max_size) };
            let span = if rng.gen_bool(0.05) { 8 } else { 2 };
            dedup(
                (0..size)
                    .map(|_| at((x + rng.gen_range(0..=span)).min(w - 1), (y + rng.gen_range(0..=span)).min(w - 1)))
                    .collect(),
            )
        })
        .filter(|p: &Vec<usize>| p.len() >= 2)
        .collect();
    finish(n, nets, None, None)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SatModel {
    /// vertices are variables, nets are clauses
    Primal,
    /// vertices are clauses, nets are variables
    Dual,
    /// vertices are literals, nets are clauses
    Literal,
}

/// Random 3-SAT formula with variable locality, in one of three
/// hypergraph representations.
pub fn sat<R: Rng>(vars: usize, clauses: usize, model: SatModel, rng: &mut R) -> Hypergraph {
    let window = (vars / 8).max(4);
    let formula: Vec<Vec<(usize, bool)>> = (0..clauses)
        .map(|_| {
            let base = rng.gen_range(0..vars);
            let mut lits: Vec<(usize, bool)> =
                (0..3).map(|_| ((base + rng.gen_range(0..window)) % vars, rng.gen_bool(0.5))).collect();
            lits.sort_unstable();
            lits.dedup_by_key(|l| l.0);
            lits
        })
        .collect();
    match model {
        SatModel::Primal => {
            let nets = formula.iter().map(|c| c.iter().map(|l| l.0).collect()).collect();
            finish(vars, nets, None, None)
        }
        SatModel::Literal => {
            let nets = formula.iter().map(|c| dedup(c.iter().map(|&(v, neg)| 2 * v + neg as usize).collect())).collect();
            finish(2 * vars, nets, None, None)
        }
        SatModel::Dual => {
            let mut nets = vec![Vec::new(); vars];
            for (c, clause) in formula.iter().enumerate() {
                for &(v, _) in clause {
                    nets[v].push(c);
                }
            }
            finish(clauses, nets, None, None)
        }
    }
}

/// Row-net model of a banded sparse matrix with a few far entries.
pub fn banded_matrix<R: Rng>(n: usize, band: usize, far: f64, rng: &mut R) -> Hypergraph {
    let nets = (0..n)
        .map(|r| {
            let mut pins = vec![r];
            for _ in 0..rng.gen_range(1..=4) {
                let off = rng.gen_range(0..=2 * band) as isize - band as isize;
                pins.push((r as isize + off).clamp(0, n as isize - 1) as usize);
            }
            if rng.gen_bool(far) {
                pins.push(rng.gen_range(0..n));
            }
            dedup(pins)
        })
        .collect();
    finish(n, nets, None, None)
}

/// Edge list of a w×h grid with random diagonals.
pub fn grid_graph<R: Rng>(w: usize, h: usize, diag: f64, rng: &mut R) -> Vec<(usize, usize)> {
    let id = |x: usize, y: usize| y * w + x;
    let mut edges = Vec::new();
    for y in 0..h {
        for x in 0..w {
            if x + 1 < w {
                edges.push((id(x, y), id(x + 1, y)));
            }
            if y + 1 < h {
                edges.push((id(x, y), id(x, y + 1)));
            }
            if x + 1 < w && y + 1 < h && rng.gen_bool(diag) {
                edges.push((id(x, y), id(x + 1, y + 1)));
            }
        }
    }
    edges
}

/// Random geometric graph: points in the unit square joined within `radius`.
pub fn geometric_graph<R: Rng>(n: usize, radius: f64, rng: &mut R) -> Vec<(usize, usize)> {
    let pts: Vec<(f64, f64)> = (0..n).map(|_| (rng.gen::<f64>(), rng.gen::<f64>())).collect();
    let cells = (1.0 / radius).floor().max(1.0) as usize;
    let cell = |p: (f64, f64)| (((p.0 * cells as f64) as usize).min(cells - 1), ((p.1 * cells as f64) as usize).min(cells - 1));
    let mut grid = vec![Vec::new(); cells * cells];
    for (i, &p) in pts.iter().enumerate() {
        let (cx, cy) = cell(p);
        grid[cy * cells + cx].push(i);
    }
    let mut edges = Vec::new();
    for (i, &p) in pts.iter().enumerate() {
        let (cx, cy) = cell(p);
        for ny in cy.saturating_sub(1)..=(cy + 1).min(cells - 1) {
            for nx in cx.saturating_sub(1)..=(cx + 1).min(cells - 1) {
                for &j in &grid[ny * cells + nx] {
                    let q = pts[j];
                    if j > i && (p.0 - q.0).powi(2) + (p.1 - q.1).powi(2) <= radius * radius {
                        edges.push((i, j));
                    }
                }
            }
        }
    }
    edges
}

/// Preferential attachment graph with `per` edges per new vertex.
pub fn preferential_graph<R: Rng>(n: usize, per: usize, rng: &mut R) -> Vec<(usize, usize)> {
    let mut ends: Vec<usize> = Vec::new();
    let mut edges = Vec::new();
    for v in 1..n {
        let mut targets: Vec<usize> = (0..per.min(v))
            .map(|_| if ends.is_empty() || rng.gen_bool(0.3) { rng.gen_range(0..v) } else { *ends.choose(rng).unwrap() })
            .collect();
        targets.sort_unstable();
        targets.dedup();
        for u in targets {
            edges.push((u, v));
            ends.push(u);
            ends.push(v);
        }
    }
    edges
}

pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Hypergraph {
    let nets: Vec<Vec<usize>> = edges.iter().map(|&(u, v)| vec![u, v]).collect();
    finish(n, nets, None, None)
}

/// Mostly two-pin nets with some larger ones.
pub fn two_pin_heavy<R: Rng>(n: usize, m: usize, rng: &mut R) -> Hypergraph {
    let nets = (0..m)
        .map(|_| {
            let u = rng.gen_range(0..n);
            let size = if rng.gen_bool(0.8) { 2 } else { rng.gen_range(3..=6) };
            dedup((0..size).map(|i| if i == 0 { u } else { (u + rng.gen_range(1..=20)) % n }).collect())
        })
        .filter(|p: &Vec<usize>| p.len() >= 2)
        .collect();
    finish(n, nets, None, None)
}

/// Replaces unit vertex weights with random weights in 1..=max.
pub fn with_vertex_weights<R: Rng>(h: &Hypergraph, max: Weight, rng: &mut R) -> Hypergraph {
    let nets: Vec<Vec<usize>> = h.nets().map(|p| p.to_vec()).collect();
    let vw = (0..h.num_vertices()).map(|_| rng.gen_range(1..=max)).collect();
    Hypergraph::with_weights(h.num_vertices(), &nets, Some(h.net_weights().to_vec()), Some(vw)).unwrap()
}

/// A named family generator for the command line.
pub fn generate(family: &str, n: usize, seed: u64) -> Option<Hypergraph> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let h = match family {
        "uniform" => random_uniform(n, n, (2, 6), &mut rng),
        "geometric" => geometric(n, n + n / 2, 6, &mut rng),
        "sat-primal" => sat(n, 4 * n, SatModel::Primal, &mut rng),
        "sat-dual" => sat(n / 4, n, SatModel::Dual, &mut rng),
        "sat-literal" => sat(n / 2, 2 * n, SatModel::Literal, &mut rng),
        "matrix" => banded_matrix(n, 6, 0.05, &mut rng),
        "two-pin" => two_pin_heavy(n, 2 * n, &mut rng),
        "grid" => {
            let w = (n as f64).sqrt().ceil() as usize;
            from_edges(w * w, &grid_graph(w, w, 0.2, &mut rng))
        }
        "rgg" => {
            let r = (3.0 / n as f64).sqrt();
            from_edges(n, &geometric_graph(n, r, &mut rng))
        }
        "powerlaw" => from_edges(n, &preferential_graph(n, 2, &mut rng)),
        _ => return None,
    };
    Some(h)
}

pub const FAMILIES: &[&str] = &[
    "uniform", "geometric", "sat-primal", "sat-dual", "sat-literal", "matrix", "two-pin", "grid", "rgg", "powerlaw",
];

/// The fixed desk corpus: 24 hypergraphs and 12 graph-derived instances
/// of 150 to 900 vertices.
pub fn desk_corpus() -> Vec<Instance> {
    let mut out = Vec::new();
    let mut push = |name: String, origin, hypergraph| out.push(Instance { name, origin, hypergraph });
    for (i, &n) in [200usize, 400, 700].iter().enumerate() {
        let seed = 100 + i as u64;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        push(format!("geometric-{n}"), Origin::Hypergraph, geometric(n, n + n / 2, 6, &mut rng));
        push(format!("uniform-{n}"), Origin::Hypergraph, random_uniform(n, n / 2 * 3, (2, 5), &mut rng));
        push(format!("sat-primal-{n}"), Origin::Hypergraph, sat(n, 3 * n, SatModel::Primal, &mut rng));
        push(format!("sat-dual-{n}"), Origin::Hypergraph, sat(n / 4, n, SatModel::Dual, &mut rng));
        push(format!("sat-literal-{n}"), Origin::Hypergraph, sat(n / 2, 2 * n, SatModel::Literal, &mut rng));
        push(format!("matrix-{n}"), Origin::Hypergraph, banded_matrix(n, 5, 0.05, &mut rng));
        push(format!("two-pin-{n}"), Origin::Hypergraph, two_pin_heavy(n, 2 * n, &mut rng));
        let base = geometric(n, n + n / 2, 5, &mut rng);
        push(format!("geometric-weighted-{n}"), Origin::Hypergraph, with_vertex_weights(&base, 3, &mut rng));

        let w = ((n as f64).sqrt().ceil()) as usize;
        push(format!("grid-{}", w * w), Origin::Graph, from_edges(w * w, &grid_graph(w, w, 0.2, &mut rng)));
        let r = (3.5 / n as f64).sqrt();
        push(format!("rgg-{n}"), Origin::Graph, from_edges(n, &geometric_graph(n, r, &mut rng)));
        push(format!("powerlaw-{n}"), Origin::Graph, from_edges(n, &preferential_graph(n, 2, &mut rng)));
        let ring: Vec<(usize, usize)> =
            (0..n).flat_map(|v| [(v, (v + 1) % n), (v, (v + 1 + rng.gen_range(1..8)) % n)]).collect();
        push(format!("ring-{n}"), Origin::Graph, from_edges(n, &ring));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn desk_corpus_shape() {
        let corpus = desk_corpus();
        assert!(corpus.len() >= 30);
        assert!(corpus.iter().filter(|i| i.origin == Origin::Graph).count() >= 10);
        for inst in &corpus {
            assert!(inst.hypergraph.is_consistent(), "{}", inst.name);
            assert!(inst.hypergraph.num_nets() > 0);
            if inst.origin == Origin::Graph {
                assert!(inst.hypergraph.nets().all(|p| p.len() == 2));
            }
        }
        let names: std::collections::BTreeSet<_> = corpus.iter().map(|i| &i.name).collect();
        assert_eq!(names.len(), corpus.len());
    }

    #[test]
    fn generation_is_deterministic() {
        for f in FAMILIES {
            let a = generate(f, 120, 5).unwrap();
            let b = generate(f, 120, 5).unwrap();
            assert_eq!(a.pins(0), b.pins(0));
            assert_eq!(a.num_pins(), b.num_pins());
        }
        assert!(generate("nope", 10, 0).is_none());
    }

    #[test]
    fn dual_sat_vertices_have_low_degree() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let h = sat(50, 200, SatModel::Dual, &mut rng);
        assert!((0..h.num_vertices()).all(|v| h.degree(v) <= 3));
    }
}
