use hyperflow_core::multilevel::initial::random_balanced;
use hyperflow_core::partition::km1_metric;
use hyperflow_core::subhypergraph::induced_subhypergraph;
use hyperflow_core::{
    extract_bipartition, max_flow, refine_kway, FlowModel, FlowProblem, Hypergraph, NetworkVariant, Partition,
    QuotientGraph, RefinerConfig,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_hypergraph(rng: &mut ChaCha8Rng, n: usize, m: usize, max_size: usize) -> Hypergraph {
    let nets: Vec<Vec<usize>> = (0..m)
        .map(|_| {
            let size = rng.gen_range(2..=max_size.min(n));
            let mut pins: Vec<usize> = (0..size).map(|_| rng.gen_range(0..n)).collect();
            pins.sort_unstable();
            pins.dedup();
            pins
        })
        .collect();
    let nw = (0..m).map(|_| rng.gen_range(1..=3)).collect();
    let vw = (0..n).map(|_| rng.gen_range(1..=2)).collect();
    Hypergraph::with_weights(n, &nets, Some(nw), Some(vw)).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    /// The flow value is the minimum local cut over the assignments of B
    /// the model allows, and local cut changes equal km1 changes.
    #[test]
    fn corridor_problem_matches_exhaustive(seed in 0u64..u64::MAX) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.gen_range(4..=12);
        let m = rng.gen_range(2..=16);
        let h = random_hypergraph(&mut rng, n, m, 5);
        let k = rng.gen_range(2..=4);
        let blocks: Vec<usize> = (0..n).map(|_| rng.gen_range(0..k)).collect();
        let part = Partition::new(&h, k, 0.2, blocks).unwrap();
        let q = QuotientGraph::new(&h, &part);
        let edges = q.edges();
        prop_assume!(!edges.is_empty());
        let (i, j) = edges[rng.gen_range(0..edges.len())];
        let members: Vec<usize> = (0..n)
            .filter(|&v| (part.block(v) == i || part.block(v) == j) && rng.gen_bool(0.7))
            .collect();
        prop_assume!(!members.is_empty() && members.len() <= 10);
        let sub = induced_subhypergraph(&h, &part, &members, i, j).unwrap();
        for model in [FlowModel::Graph, FlowModel::Hypergraph] {
            for variant in NetworkVariant::ALL {
                for single_pin in [false, true] {
                    let p = FlowProblem::build(&sub, model, variant, single_pin).unwrap();
                    let f = max_flow(&p).unwrap();
                    let b = sub.num_vertices();
                    let mut best = u64::MAX;
                    for mask in 0u32..(1 << b) {
                        let side: Vec<bool> = (0..b).map(|x| mask >> x & 1 == 1).collect();
                        if p.respects_forced(&side) {
                            best = best.min(p.local_cut(&side));
                        }
                    }
                    prop_assert_eq!(f.value(), best, "{:?} {:?} {}", model, variant, single_pin);
                    let side = extract_bipartition(&p, &f);
                    prop_assert!(p.respects_forced(&side));
                    prop_assert_eq!(p.local_cut(&side), f.value());

                    let current = p.current_assignment();
                    let mut moved = part.blocks().to_vec();
                    for (v, &src) in side.iter().enumerate() {
                        moved[sub.parent_vertex(v)] = if src { i } else { j };
                    }
                    let delta = km1_metric(&h, &moved) as i64 - part.km1() as i64;
                    let local = p.local_cut(&side) as i64 - p.local_cut(&current) as i64;
                    prop_assert_eq!(delta, local);
                }
            }
        }
    }

    #[test]
    fn refinement_never_worsens(seed in 0u64..u64::MAX) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.gen_range(10..=60);
        let m = rng.gen_range(5..=80);
        let h = random_hypergraph(&mut rng, n, m, 6);
        let k = rng.gen_range(2..=4);
        let eps = [0.03, 0.1, 0.3][rng.gen_range(0..3)];
        let blocks = random_balanced(&h, k, &mut rng);
        let mut part = Partition::new(&h, k, eps, blocks).unwrap();
        let before = part.km1();
        let balanced = part.is_balanced();
        let cfg = RefinerConfig {
            model: if rng.gen_bool(0.5) { FlowModel::Graph } else { FlowModel::Hypergraph },
            variant: NetworkVariant::ALL[rng.gen_range(0..3)],
            most_balanced: rng.gen_bool(0.5),
            single_pin_modeling: rng.gen_bool(0.5),
            s3: rng.gen_bool(0.5),
            alpha_prime: [1, 4, 16][rng.gen_range(0..3)],
            ..RefinerConfig::default()
        };
        let stats = refine_kway(&h, &mut part, &cfg, &mut rng);
        prop_assert_eq!(stats.violations, 0);
        prop_assert_eq!(stats.ceiling_hits, 0);
        prop_assert!(part.km1() <= before);
        prop_assert_eq!(part.km1(), km1_metric(&h, part.blocks()));
        prop_assert!(!balanced || part.is_balanced());
        prop_assert!(!part.has_empty_block());
    }
}
