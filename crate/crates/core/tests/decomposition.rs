use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use primeval::decomposition::{
    build_tree, compute_q, is_p4_tidy, is_qq4, is_qq4_exhaustive, recognize_quasi_spider, recognize_spider, Mode,
    NodeKind,
};
use primeval::oracle::{generate, GenClass, GeneratorSpec};
use primeval::Graph;

fn graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n).prop_flat_map(|n| {
        proptest::collection::vec(any::<bool>(), n * (n - 1) / 2).prop_map(move |bits| {
            let mut g = Graph::new(n);
            let mut k = 0;
            for u in 0..n {
                for v in u + 1..n {
                    if bits[k] {
                        g.add_edge(u, v).unwrap();
                    }
                    k += 1;
                }
            }
            g
        })
    })
}

fn permuted(g: &Graph, perm: &[usize]) -> Graph {
    Graph::from_edges(g.n(), g.edges().map(|(u, v)| (perm[u], perm[v]))).unwrap()
}

fn naive_is_qq4(g: &Graph, q: usize) -> bool {
    let quads: Vec<u32> = g
        .enumerate_p4s()
        .iter()
        .map(|p| p.iter().fold(0u32, |m, &v| m | 1 << v))
        .collect();
    (0u32..1 << g.n())
        .filter(|s| s.count_ones() as usize <= q)
        .all(|s| quads.iter().filter(|&&p| p & s == p).count() <= q - 4)
}

const CLASSES: [GenClass; 6] = [
    GenClass::Cograph,
    GenClass::P4Sparse,
    GenClass::Qq4 { q: 6 },
    GenClass::Qq4 { q: 8 },
    GenClass::Qq4 { q: 10 },
    GenClass::P4Tidy,
];

#[test]
fn generated_trees_round_trip_up_to_forty_vertices() {
    for (i, class) in CLASSES.iter().cycle().take(240).enumerate() {
        let (g, tree) = generate(&GeneratorSpec::new(*class, 1, 40, 1000 + i as u64));
        assert!(g.n() <= 40);
        assert_eq!(tree.reassemble(), g, "{class:?} seed {i}");
        tree.check_against(&g).unwrap();
        let built = build_tree(&g, class.mode()).unwrap_or_else(|e| panic!("{class:?} seed {i}: {e}"));
        built.check_against(&g).unwrap();
        assert_eq!(built.reassemble(), g);
    }
}

#[test]
fn trees_relabel_with_their_graph() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for (i, class) in CLASSES.iter().cycle().take(120).enumerate() {
        let (g, _) = generate(&GeneratorSpec::new(*class, 1, 24, 77 + i as u64));
        let mut perm: Vec<usize> = (0..g.n()).collect();
        perm.shuffle(&mut rng);
        let h = permuted(&g, &perm);
        let tree = build_tree(&g, class.mode()).unwrap();
        let moved = tree.relabel(&perm);
        moved.check_against(&h).unwrap();
        build_tree(&h, class.mode()).unwrap().check_against(&h).unwrap();
    }
}

#[test]
fn generated_members_are_accepted_by_the_definitions() {
    for (i, class) in CLASSES.iter().cycle().take(180).enumerate() {
        let (g, _) = generate(&GeneratorSpec::new(*class, 1, 12, 4242 + i as u64));
        match class.mode() {
            Mode::P4Tidy => assert!(is_p4_tidy(&g)),
            Mode::Qq4 { q } => assert!(naive_is_qq4(&g, q), "{class:?} {:?}", g),
        }
    }
}

#[test]
fn spider_nodes_carry_valid_partitions() {
    let mut spiders = 0;
    for (i, class) in CLASSES.iter().cycle().take(180).enumerate() {
        let (g, _) = generate(&GeneratorSpec::new(*class, 4, 20, 99 + i as u64));
        let tree = build_tree(&g, class.mode()).unwrap();
        for node in &tree.nodes {
            if let NodeKind::Spider { partition } | NodeKind::QuasiSpider { partition } = &node.kind {
                spiders += 1;
                let (h, map) = g.induced_subgraph(&node.vertices).unwrap();
                let local: Vec<usize> = (0..g.n())
                    .map(|v| map.iter().position(|&x| x == v).unwrap_or(usize::MAX))
                    .collect();
                let part = partition.relabel(&local);
                part.check(&h).unwrap();
                let found = if part.is_quasi() { recognize_quasi_spider(&h) } else { recognize_spider(&h) };
                assert!(found.is_some());
            }
        }
    }
    assert!(spiders > 20, "only {spiders} spider nodes generated");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn recognition_agrees_with_definitions(g in graph(7)) {
        prop_assert_eq!(build_tree(&g, Mode::P4Tidy).is_ok(), is_p4_tidy(&g));
        for q in 4..=8 {
            let by_tree = build_tree(&g, Mode::Qq4 { q }).is_ok();
            prop_assert_eq!(by_tree, naive_is_qq4(&g, q));
            prop_assert_eq!(is_qq4(&g, q), by_tree);
            prop_assert_eq!(is_qq4_exhaustive(&g, q), by_tree);
        }
    }

    #[test]
    fn q_value_is_least_and_membership_is_monotone(g in graph(9)) {
        let q = compute_q(&g).q;
        prop_assert!(q >= 4);
        prop_assert!(is_qq4_exhaustive(&g, q));
        if q > 4 {
            prop_assert!(!is_qq4_exhaustive(&g, q - 1));
        }
        for q in 4..12 {
            if is_qq4_exhaustive(&g, q) {
                prop_assert!(is_qq4_exhaustive(&g, q + 1));
            }
        }
    }

    #[test]
    fn classes_are_closed_under_complement(g in graph(9)) {
        let h = g.complement();
        prop_assert_eq!(compute_q(&g), compute_q(&h));
        prop_assert_eq!(is_p4_tidy(&g), is_p4_tidy(&h));
        prop_assert_eq!(build_tree(&g, Mode::P4Tidy).is_ok(), build_tree(&h, Mode::P4Tidy).is_ok());
        for q in [4, 5, 7] {
            prop_assert_eq!(build_tree(&g, Mode::Qq4 { q }).is_ok(), build_tree(&h, Mode::Qq4 { q }).is_ok());
        }
    }

    #[test]
    fn accepted_trees_reassemble(g in graph(9)) {
        for mode in [Mode::P4Tidy, Mode::Qq4 { q: 6 }, Mode::Qq4 { q: 9 }] {
            if let Ok(tree) = build_tree(&g, mode) {
                prop_assert_eq!(tree.reassemble(), g.clone());
                prop_assert!(tree.check_against(&g).is_ok());
                prop_assert!(serde_json::from_str::<serde_json::Value>(&tree.to_json()).is_ok());
            }
        }
    }
}

#[test]
fn known_q_values() {
    use primeval::graph::named::*;
    assert_eq!(compute_q(&complete_bipartite(3, 4)).q, 4);
    assert_eq!(compute_q(&path(4)).q, 5);
    assert_eq!(compute_q(&path(5)).q, 6);
    assert!(is_p4_tidy(&cycle(5)));
    assert!(!is_p4_tidy(&path(6)));
}
