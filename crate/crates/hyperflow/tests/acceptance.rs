//! Acceptance suite. Runs every criterion, prints one line per criterion and
//! fails if any criterion fails.

use std::io::Write;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use hyperflow::bench;
use hyperflow::cli;
use hyperflow::corpus::{self, Instance};
use hyperflow::io;
use hyperflow::netstats;
use hyperflow::run;
use hyperflow_core::multilevel::PartitionerConfig;
use hyperflow_core::oracle::{brute_best_partition, brute_min_st_cut, enumerate_network_min_cuts};
use hyperflow_core::partition::cut_metric;
use hyperflow_core::subhypergraph::induced_subhypergraph;
use hyperflow_core::{
    build_pq_dag, extract_bipartition, max_flow, most_balanced_min_cut, partition, FlowModel, FlowProblem,
    Hypergraph, NetworkVariant, NoClock, Partition, SubHypergraph, Weight,
};

const FLOW_INSTANCES: usize = 600;
const MBMC_INSTANCES: usize = 250;
const MBMC_SEEDS: u64 = 8;
const MBMC_MIN_OPTIMAL: f64 = 0.95;
const GRID_EPS: [f64; 3] = [0.01, 0.03, 0.05];
const GRID_K: [usize; 3] = [2, 4, 8];
const MODEL_ALPHAS: [u32; 5] = [1, 2, 4, 8, 16];
const MODEL_K: usize = 2;
const ABLATION_K: [usize; 2] = [2, 4];
const ABLATION_SEEDS: u64 = 2;
const HEURISTIC_MIN_CALL_REDUCTION: f64 = 0.25;
const HEURISTIC_MAX_KM1_DEGRADATION: f64 = 0.01;
const HEURISTIC_SEEDS: u64 = 4;
const TOY_INSTANCES: usize = 100;
const TOY_SEEDS: u64 = 10;
const TOY_MIN_OPTIMAL: f64 = 0.90;

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: String) -> Verdict {
    Verdict { pass, detail }
}

fn random_hypergraph(rng: &mut ChaCha8Rng, n: usize, m: usize, max_size: usize, max_w: Weight) -> Hypergraph {
    let nets: Vec<Vec<usize>> = (0..m)
        .map(|_| {
            let size = rng.gen_range(1..=max_size.min(n));
            let mut pins: Vec<usize> = (0..size).map(|_| rng.gen_range(0..n)).collect();
            pins.sort_unstable();
            pins.dedup();
            pins
        })
        .collect();
    let nw = (0..m).map(|_| rng.gen_range(1..=max_w)).collect();
    let vw = (0..n).map(|_| rng.gen_range(1..=max_w)).collect();
    Hypergraph::with_weights(n, &nets, Some(nw), Some(vw)).unwrap()
}

fn st_pair(rng: &mut ChaCha8Rng, n: usize) -> (usize, usize) {
    let s = rng.gen_range(0..n);
    (s, (s + rng.gen_range(1..n)) % n)
}

fn geomean_of<F: Fn(&Instance) -> f64>(corpus: &[Instance], f: F) -> f64 {
    bench::geometric_mean(&corpus.iter().map(f).collect::<Vec<_>>())
}

fn run_km1(h: &Hypergraph, k: usize, eps: f64, cfg: &PartitionerConfig, seed: u64) -> (u64, u64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let out = partition(h, k, eps, cfg, &mut rng, &NoClock).unwrap();
    (out.partition.km1(), out.stats.flow_calls)
}

/// Max-flow value on all three networks equals the brute-force minimum cut.
fn flow_values_match_brute_force() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut bad = 0;
    for _ in 0..FLOW_INSTANCES {
        let n = rng.gen_range(2..=12);
        let m = rng.gen_range(0..=20);
        let h = random_hypergraph(&mut rng, n, m, 6, 4);
        let (s, t) = st_pair(&mut rng, n);
        let (expected, _) = brute_min_st_cut(&h, s, t).unwrap();
        let sub = SubHypergraph::whole(&h);
        for variant in NetworkVariant::ALL {
            let p = FlowProblem::vertex_pair(&sub, variant, s, t).unwrap();
            if max_flow(&p).unwrap().value() != expected {
                bad += 1;
            }
        }
    }
    verdict(bad == 0, format!("{FLOW_INSTANCES} instances x 3 networks, {bad} mismatches"))
}

/// The extracted bipartition cuts exactly the flow value.
fn extraction_cuts_the_flow_value() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let (mut bad, mut with_removed) = (0, 0);
    for _ in 0..FLOW_INSTANCES {
        let n = rng.gen_range(2..=12);
        let m = rng.gen_range(0..=20);
        let h = random_hypergraph(&mut rng, n, m, 6, 4);
        let (s, t) = st_pair(&mut rng, n);
        let sub = SubHypergraph::whole(&h);
        for variant in NetworkVariant::ALL {
            let p = FlowProblem::vertex_pair(&sub, variant, s, t).unwrap();
            let f = max_flow(&p).unwrap();
            let side = extract_bipartition(&p, &f);
            let blocks: Vec<usize> = side.iter().map(|&x| usize::from(!x)).collect();
            if !side[s] || side[t] || cut_metric(&h, &blocks) != f.value() {
                bad += 1;
            }
            if variant == NetworkVariant::Reduced && !p.network().removed_vertices().is_empty() {
                with_removed += 1;
            }
        }
    }
    verdict(
        bad == 0 && with_removed > 0,
        format!("{bad} mismatches; {with_removed} reduced networks had eliminated vertices"),
    )
}

/// The sweep finds the most balanced minimum cut for some seed.
fn sweep_finds_balanced_min_cuts() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let (mut done, mut optimal, mut wrong_value) = (0, 0, 0);
    while done < MBMC_INSTANCES {
        let n = rng.gen_range(4..=9);
        let m = rng.gen_range(1..=(16 - (n - 2)) / 2);
        let h = random_hypergraph(&mut rng, n, m, 4, 4);
        let (s, t) = st_pair(&mut rng, n);
        let sub = SubHypergraph::whole(&h);
        let p = FlowProblem::vertex_pair(&sub, NetworkVariant::Lawler, s, t).unwrap();
        let f = max_flow(&p).unwrap();
        let mut sources = p.source_targets().to_vec();
        sources.push(p.source());
        let Ok(cuts) = enumerate_network_min_cuts(p.network(), &sources, &[p.sink()]) else { continue };
        done += 1;
        let total = h.total_weight();
        let max_side = |side: &[bool]| {
            let w: Weight = (0..n).filter(|&v| side[v]).map(|v| h.vertex_weight(v)).sum();
            w.max(total - w)
        };
        let best = cuts
            .iter()
            .map(|(set, _)| {
                let side: Vec<bool> = (0..n).map(|v| set[p.network().vertex_node(v).unwrap()]).collect();
                max_side(&side)
            })
            .min()
            .unwrap();
        let part = Partition::new(&h, 2, 0.0, (0..n).map(|v| v % 2).collect()).unwrap();
        let mut hit = false;
        for seed in 0..MBMC_SEEDS {
            let dag = build_pq_dag(&f);
            let mut r = ChaCha8Rng::seed_from_u64(seed);
            let side = most_balanced_min_cut(&dag, &p, &f, &part, 1, &mut r);
            if p.local_cut(&side) != f.value() {
                wrong_value += 1;
            }
            hit |= max_side(&side) == best;
        }
        optimal += usize::from(hit);
    }
    let rate = optimal as f64 / done as f64;
    verdict(
        rate >= MBMC_MIN_OPTIMAL && wrong_value == 0,
        format!("{optimal}/{done} optimal ({:.1}%), {wrong_value} cuts differing from |f|", rate * 100.0),
    )
}

/// Flow refinement never increases km1 and never breaks a balanced input.
fn refinement_keeps_cut_property(corpus: &[Instance]) -> Verdict {
    let base = PartitionerConfig { flows: false, ..Default::default() };
    let cfg = PartitionerConfig::default();
    let (mut runs, mut violations, mut improved) = (0, 0, 0);
    for inst in corpus {
        for k in GRID_K {
            for eps in GRID_EPS {
                let h = &inst.hypergraph;
                let mut rng = ChaCha8Rng::seed_from_u64(runs as u64);
                let start = partition(h, k, eps, &base, &mut rng, &NoClock).unwrap().partition;
                let before = start.km1();
                let balanced = start.is_balanced();
                runs += 1;
                match run::run_refine(h, &inst.name, start, &cfg, "default", runs as u64) {
                    Ok((out, _)) => {
                        let p = &out.partition;
                        if p.km1() > before || (balanced && !p.is_balanced()) {
                            violations += 1;
                        }
                        improved += usize::from(p.km1() < before);
                    }
                    Err(_) => violations += 1,
                }
            }
        }
    }
    verdict(violations == 0, format!("{runs} refinements, {improved} improved, {violations} violations"))
}

/// F_H is no worse than F_G with flows only, per (α′, ε) cell.
fn hypergraph_model_beats_graph_model(corpus: &[Instance]) -> Verdict {
    let mut failed = Vec::new();
    let mut worst: f64 = f64::INFINITY;
    for alpha in MODEL_ALPHAS {
        for eps in GRID_EPS {
            let g = |model| {
                let mut cfg = PartitionerConfig { fm: false, ..Default::default() };
                cfg.refiner.most_balanced = false;
                cfg.refiner.alpha_prime = alpha;
                cfg.refiner.model = model;
                geomean_of(corpus, |i| run_km1(&i.hypergraph, MODEL_K, eps, &cfg, 1).0 as f64)
            };
            let fh = g(FlowModel::Hypergraph);
            let fg = g(FlowModel::Graph);
            worst = worst.min(bench::improvement(fh, fg));
            if fh > fg {
                failed.push(format!("a'={alpha} eps={eps}: {fh:.2} > {fg:.2}"));
            }
        }
    }
    verdict(
        failed.is_empty(),
        format!("15 cells, smallest improvement of F_H over F_G {:.2}%; {}", worst * 100.0, failed.join("; ")),
    )
}

/// (+F,+M,+FM) ≤ (+F,−M,+FM) ≤ (−,−,+FM).
fn ablation_order_holds(corpus: &[Instance]) -> Verdict {
    let full = PartitionerConfig::default();
    let mut no_m = full.clone();
    no_m.refiner.most_balanced = false;
    let fm_only = PartitionerConfig { flows: false, ..Default::default() };
    let g = |cfg: &PartitionerConfig| {
        let mut vals = Vec::new();
        for inst in corpus {
            for k in ABLATION_K {
                let mean = (0..ABLATION_SEEDS).map(|s| run_km1(&inst.hypergraph, k, 0.03, cfg, s).0 as f64).sum::<f64>()
                    / ABLATION_SEEDS as f64;
                vals.push(mean);
            }
        }
        bench::geometric_mean(&vals)
    };
    let (a, b, c) = (g(&full), g(&no_m), g(&fm_only));
    verdict(a <= b && b <= c, format!("geometric means {a:.3} <= {b:.3} <= {c:.3}"))
}

/// S1+S2+S3 save flow calls at a small quality cost.
fn speedup_heuristics_save_calls(corpus: &[Instance]) -> Verdict {
    let on = PartitionerConfig::default();
    let mut off = on.clone();
    off.refiner.s1 = false;
    off.refiner.s2 = false;
    off.refiner.s3 = false;
    let totals = |cfg: &PartitionerConfig| {
        let mut calls = 0;
        let mut km1 = Vec::new();
        for inst in corpus {
            let mut sum = 0.0;
            for s in 0..HEURISTIC_SEEDS {
                let (c, f) = run_km1(&inst.hypergraph, 8, 0.03, cfg, s);
                sum += c as f64;
                calls += f;
            }
            km1.push(sum / HEURISTIC_SEEDS as f64);
        }
        (calls, bench::geometric_mean(&km1))
    };
    let (calls_on, km1_on) = totals(&on);
    let (calls_off, km1_off) = totals(&off);
    let reduction = 1.0 - calls_on as f64 / calls_off as f64;
    let degradation = km1_on / km1_off - 1.0;
    verdict(
        reduction >= HEURISTIC_MIN_CALL_REDUCTION && degradation <= HEURISTIC_MAX_KM1_DEGRADATION,
        format!(
            "flow calls {calls_on} vs {calls_off} ({:.1}% fewer), km1 {km1_on:.2} vs {km1_off:.2} ({:+.2}%)",
            reduction * 100.0,
            degradation * 100.0
        ),
    )
}

fn has_tied_single_pin_nets(h: &Hypergraph, part: &Partition, members: &[usize]) -> bool {
    let sub = induced_subhypergraph(h, part, members, 0, 1).unwrap();
    (0..sub.num_nets()).any(|e| {
        let ext = sub.external_pins(e);
        sub.is_border_net(e) && sub.hypergraph().net_size(e) == 1 && (ext.first > 0 || ext.second > 0)
    })
}

/// Network sizes on two-pin-heavy and low-degree corpora.
fn network_sizes_shrink() -> Verdict {
    let mut problems = Vec::new();
    let mut counts = [0usize; 3];
    for seed in 0..6u64 {
        for (family, n) in [("two-pin", 600), ("sat-dual", 800)] {
            let h = corpus::generate(family, n, seed).unwrap();
            let part = netstats::quick_bipartition(&h, seed).unwrap();
            let members = netstats::corridor_of_size(&h, &part, n / 3, seed);
            let rows = netstats::netstats(&h, &part, &members).unwrap();
            let (lawler, liu, reduced, single) = (&rows[0], &rows[1], &rows[2], &rows[3]);
            if family == "two-pin" {
                counts[0] += 1;
                if liu.arcs >= lawler.arcs {
                    problems.push(format!("{family}/{seed}: liu-wong arcs {} >= lawler {}", liu.arcs, lawler.arcs));
                }
            } else {
                counts[1] += 1;
                if reduced.nodes >= liu.nodes || reduced.arcs > liu.arcs {
                    problems.push(format!(
                        "{family}/{seed}: reduced ({},{}) vs liu-wong ({},{})",
                        reduced.nodes, reduced.arcs, liu.nodes, liu.arcs
                    ));
                }
            }
            if has_tied_single_pin_nets(&h, &part, &members) {
                counts[2] += 1;
                if single.problem_nodes + single.problem_arcs >= reduced.problem_nodes + reduced.problem_arcs {
                    problems.push(format!("{family}/{seed}: single-pin modeling did not shrink the problem"));
                }
            }
        }
    }
    verdict(
        problems.is_empty() && counts[2] > 0,
        format!(
            "{} two-pin, {} dual-sat corridors, {} with single-pin border nets; {}",
            counts[0],
            counts[1],
            counts[2],
            problems.join("; ")
        ),
    )
}

/// The pipeline reaches the exhaustive optimum on small instances.
fn small_instances_reach_optimum() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let (mut runs, mut hits) = (0, 0);
    let cfg = PartitionerConfig::default();
    for _ in 0..TOY_INSTANCES {
        let n = rng.gen_range(2..=9);
        let m = rng.gen_range(1..=12);
        let h = random_hypergraph(&mut rng, n, m, 4, 1);
        let Some((best, _)) = brute_best_partition(&h, 2, 0.03).unwrap() else { continue };
        for seed in 0..TOY_SEEDS {
            runs += 1;
            let (km1, _) = run_km1(&h, 2, 0.03, &cfg, seed);
            hits += usize::from(km1 == best);
        }
    }
    let rate = hits as f64 / runs as f64;
    verdict(rate >= TOY_MIN_OPTIMAL, format!("{hits}/{runs} runs optimal ({:.1}%)", rate * 100.0))
}

/// Two identical bench invocations write identical tables up to time columns.
fn bench_is_deterministic() -> Verdict {
    let dir = tempfile::tempdir().unwrap();
    let corpus = corpus::desk_corpus();
    let mut manifest = String::new();
    for inst in corpus.iter().step_by(6) {
        let file = format!("{}.hgr", inst.name);
        std::fs::write(dir.path().join(&file), io::write_hgr(&inst.hypergraph)).unwrap();
        manifest.push_str(&format!("{file},4,0.03\n"));
    }
    manifest.push_str("missing.hgr,2,0.03\n");
    std::fs::write(dir.path().join("manifest.csv"), manifest).unwrap();
    std::fs::write(dir.path().join("configs.txt"), "full:\nfm-only: --flows off\nno-mbmc: --mbmc off\n").unwrap();
    let bench_once = |out: &str| {
        let args = [
            "bench",
            "--manifest",
            dir.path().join("manifest.csv").to_str().unwrap(),
            "--configs",
            dir.path().join("configs.txt").to_str().unwrap(),
            "--reps",
            "3",
            "--seed",
            "7",
            "--out",
            dir.path().join(out).to_str().unwrap(),
        ]
        .map(String::from);
        cli::run(args, &mut Vec::new(), &mut Vec::new())
    };
    let codes = (bench_once("a"), bench_once("b"));
    let mut differing = Vec::new();
    for file in [bench::RUNS_FILE, bench::INSTANCES_FILE, bench::SUMMARY_FILE, bench::IMPROVEMENTS_FILE] {
        let read = |d: &str| std::fs::read_to_string(dir.path().join(d).join(file)).unwrap_or_default();
        let (a, b) = (read("a"), read("b"));
        if a.is_empty() || bench::strip_time_columns(&a) != bench::strip_time_columns(&b) {
            differing.push(file);
        }
    }
    verdict(
        codes == (0, 0) && differing.is_empty(),
        format!("exit codes {codes:?}; differing tables: {differing:?}"),
    )
}

fn main() {
    let args: Vec<String> = std::env::args().collect();
    // libtest-style flags passed through by cargo are ignored
    if args.iter().any(|a| a == "--list") {
        println!("acceptance: test");
        return;
    }
    let corpus = corpus::desk_corpus();
    let criteria: Vec<(&str, Box<dyn Fn() -> Verdict + '_>)> = vec![
        ("min-cut equivalence across networks", Box::new(flow_values_match_brute_force)),
        ("bipartition extraction", Box::new(extraction_cuts_the_flow_value)),
        ("most balanced minimum cut", Box::new(sweep_finds_balanced_min_cuts)),
        ("refinement cut property", Box::new(|| refinement_keeps_cut_property(&corpus))),
        ("hypergraph vs graph flow model", Box::new(|| hypergraph_model_beats_graph_model(&corpus))),
        ("configuration ablation order", Box::new(|| ablation_order_holds(&corpus))),
        ("speedup heuristics", Box::new(|| speedup_heuristics_save_calls(&corpus))),
        ("network size statistics", Box::new(network_sizes_shrink)),
        ("optimality on small instances", Box::new(small_instances_reach_optimum)),
        ("bench determinism", Box::new(bench_is_deterministic)),
    ];
    let only: Option<usize> = std::env::var("ACCEPTANCE_ONLY").ok().and_then(|s| s.parse().ok());
    let mut failures = 0;
    let mut err = std::io::stderr();
    for (i, (name, f)) in criteria.iter().enumerate() {
        if only.is_some_and(|o| o != i + 1) {
            continue;
        }
        let start = Instant::now();
        let v = f();
        let status = if v.pass { "PASS" } else { "FAIL" };
        failures += usize::from(!v.pass);
        let line = format!(
            "criterion {:>2}: {status} {name}: {} [{:.1}s]",
            i + 1,
            v.detail,
            start.elapsed().as_secs_f64()
        );
        println!("{line}");
        let _ = err.flush();
    }
    if failures > 0 {
        println!("{failures} acceptance criteria failed");
        std::process::exit(1);
    }
}
