use primeval::decomposition::{
    build_tree, compute_q, spider_graph, Mode, NodeKind, PairKind, Replacement, Side, SpiderPartition, Thickness,
};
use primeval::engine::{combine_join, quasi_spider_value, solve, spider_value, two_clique_color};
use primeval::graph::named::{complete_bipartite, empty, path};
use primeval::oracle::{exact_chromatic, exact_coloring, family_colorings, generate, GenClass, GeneratorSpec, OracleBudget};
use primeval::validators::check;
use primeval::{ColoringFamily, Graph, QValue, VertexSet};

use ColoringFamily::*;

fn oracle(g: &Graph, f: ColoringFamily) -> usize {
    exact_coloring(g, f, &OracleBudget::default()).unwrap().colors_used()
}

fn generated(count: usize, max_n: usize, seed: u64) -> Vec<(GenClass, Graph)> {
    let classes = [
        GenClass::Cograph,
        GenClass::P4Sparse,
        GenClass::Qq4 { q: 7 },
        GenClass::P4Tidy,
    ];
    (0..count)
        .map(|i| {
            let class = classes[i % classes.len()];
            (class, generate(&GeneratorSpec::new(class, 2, max_n, seed + i as u64)).0)
        })
        .collect()
}

fn thin(head: usize, k: usize) -> SpiderPartition {
    SpiderPartition {
        head: VertexSet::new((0..head).collect()),
        clique: (head..head + k).collect(),
        stable: (head + k..head + 2 * k).collect(),
        thickness: Thickness::Thin,
        replaced: None,
    }
}

#[test]
fn chain_of_chromatic_numbers_on_connected_members() {
    for (class, g) in generated(120, 9, 10) {
        if !g.is_connected() {
            continue;
        }
        let chi = oracle(&g, Proper);
        let values: Vec<usize> = [Acyclic, Star, Nonrepetitive, Harmonious]
            .iter()
            .map(|&f| solve(&g, f, class.mode()).unwrap().value)
            .collect();
        assert!(chi <= values[0], "{g:?}");
        assert!(values.windows(2).all(|w| w[0] <= w[1]), "{values:?} on {g:?}");
    }
}

#[test]
fn witnesses_are_sound_and_tight() {
    for (class, g) in generated(160, 14, 500) {
        for f in ColoringFamily::RESTRICTED {
            if f == Harmonious && !g.is_connected() {
                continue;
            }
            if f == Nonrepetitive && g.n() > 12 {
                continue;
            }
            let r = solve(&g, f, class.mode()).unwrap();
            assert!(check(f, &g, &r.witness).unwrap(), "{f} on {g:?}");
            assert_eq!(r.witness.colors_used(), r.value);
            assert_eq!(solve(&g, f, class.mode()).unwrap(), r);
        }
    }
}

#[test]
fn cograph_numbers_collapse() {
    for (_, g) in generated(200, 14, 900).into_iter().filter(|(c, _)| *c == GenClass::Cograph) {
        let mode = Mode::Qq4 { q: 4 };
        let a = solve(&g, Acyclic, mode).unwrap().value;
        assert_eq!(solve(&g, Star, mode).unwrap().value, a);
        assert_eq!(solve(&g, Nonrepetitive, mode).unwrap().value, a);
    }
}

#[test]
fn join_of_stable_sets() {
    let g = complete_bipartite(3, 3);
    assert_eq!(solve(&g, Star, Mode::Qq4 { q: 4 }).unwrap().value, 4);
    assert_eq!(oracle(&g, Star), 4);
    let side = exact_chromatic(&empty(3), Star, &OracleBudget::default()).unwrap();
    let joined = combine_join(Star, &side, &side);
    assert_eq!(joined.value, 4);
    assert!(check(Star, &g, &joined.witness).unwrap());
    assert_eq!(combine_join(Clique, &side, &side).value, 2);
}

#[test]
fn spider_formula_examples() {
    // thin, k = 3, head K1
    let part = thin(1, 3);
    let g = spider_graph(&part, &[]);
    let head = exact_chromatic(&Graph::new(1), Acyclic, &OracleBudget::default()).unwrap();
    let r = spider_value(Acyclic, &g, &part, Some(&head)).unwrap();
    assert_eq!(r.value, 4);
    assert_eq!(oracle(&g, Acyclic), 4);

    // thin, k = 2, head K1: |R| + k + 1
    let part = thin(1, 2);
    let g = spider_graph(&part, &[]);
    assert_eq!(spider_value(Harmonious, &g, &part, None).unwrap().value, 4);
    assert_eq!(oracle(&g, Harmonious), 4);
    assert_eq!(solve(&g, Harmonious, Mode::P4Tidy).unwrap().value, 4);
}

#[test]
fn thick_spider_without_head() {
    let part = SpiderPartition {
        head: VertexSet::empty(),
        clique: vec![0, 1, 2],
        stable: vec![3, 4, 5],
        thickness: Thickness::Thick,
        replaced: None,
    };
    let g = spider_graph(&part, &[]);
    assert_eq!(spider_value(Star, &g, &part, None).unwrap().value, 4);
    assert_eq!(oracle(&g, Star), 4);
    // spiders are P4-sparse
    let q = compute_q(&g);
    assert_eq!(q, QValue { q: 5 });
    let c = two_clique_color(&g, q).unwrap();
    assert!(check(Clique, &g, &c).unwrap());
    assert_eq!(c.colors_used(), 2);
}

#[test]
fn thin_k2_spider_without_head_needs_three_colors() {
    // the thin spider with k = 2 and no head is P4
    let part = thin(0, 2);
    let g = spider_graph(&part, &[]);
    assert_eq!(g.p4_count(), 1);
    assert_eq!(spider_value(Star, &g, &part, None).unwrap().value, 2);
    assert_eq!(oracle(&g, Star), 3);
    let r = solve(&g, Star, Mode::P4Tidy).unwrap();
    assert_eq!(r.value, 3);
    assert_eq!(r.fallbacks().count(), 1);
}

fn quasi(side: Side, kind: PairKind) -> SpiderPartition {
    // C = {0,1}, S = {2,3}; vertex 4 is the twin of the first vertex on `side`
    let (clique, stable, pair) = match side {
        Side::InC => (vec![0, 1, 4], vec![2, 3], (0, 4)),
        Side::InS => (vec![0, 1], vec![2, 3, 4], (2, 4)),
    };
    SpiderPartition {
        head: VertexSet::empty(),
        clique,
        stable,
        thickness: Thickness::Thin,
        replaced: Some(Replacement { side, kind, pair }),
    }
}

#[test]
fn quasi_spider_examples() {
    let part = quasi(Side::InC, PairKind::K2);
    let g = spider_graph(&part, &[]);
    assert_eq!(quasi_spider_value(Acyclic, &g, &part, None).unwrap().value, 3);
    assert_eq!(oracle(&g, Acyclic), 3);

    // the case table gives k = 2 here; exhaustive search needs 3
    let part = quasi(Side::InS, PairKind::K2Bar);
    let g = spider_graph(&part, &[]);
    assert_eq!(quasi_spider_value(Star, &g, &part, None).unwrap().value, 2);
    assert_eq!(oracle(&g, Star), 3);
    assert_eq!(solve(&g, Star, Mode::P4Tidy).unwrap().value, 3);
    assert_eq!(quasi_spider_value(Clique, &g, &part, None).unwrap().value, 2);
}

#[test]
fn spider_acyclic_adds_exactly_k() {
    let mut seen = 0;
    for (class, g) in generated(200, 12, 31) {
        let tree = build_tree(&g, class.mode()).unwrap();
        for node in &tree.nodes {
            let NodeKind::Spider { partition } = &node.kind else { continue };
            let (h, map) = g.induced_subgraph(&node.vertices).unwrap();
            let local: Vec<usize> = (0..g.n())
                .map(|v| map.iter().position(|&x| x == v).unwrap_or(usize::MAX))
                .collect();
            let part = partition.relabel(&local);
            let inner = if part.head.is_empty() {
                None
            } else {
                let (r, _) = h.induced_subgraph(&part.head).unwrap();
                Some(exact_chromatic(&r, Acyclic, &OracleBudget::default()).unwrap())
            };
            let value = spider_value(Acyclic, &h, &part, inner.as_ref()).unwrap().value;
            assert_eq!(value - inner.map_or(0, |r| r.value), part.k());
            seen += 1;
        }
    }
    assert!(seen > 10);
}

#[test]
fn separable_component_hanging_off_one_vertex() {
    // P4 0-1-2-3 with vertex 4 complete to its midpoints
    let g = Graph::from_edges(5, [(0, 1), (1, 2), (2, 3), (4, 1), (4, 2)]).unwrap();
    let q = compute_q(&g).q;
    let mode = Mode::Qq4 { q };
    let tree = build_tree(&g, mode).unwrap();
    for f in ColoringFamily::RESTRICTED {
        assert_eq!(solve(&g, f, mode).unwrap().value, oracle(&g, f), "{f} via {:?}", tree.root().kind.name());
    }
}

#[test]
fn canonical_colorings_count_all_colorings() {
    for n in 1..=5 {
        for g in primeval::oracle::graphs_up_to_iso(n) {
            for f in ColoringFamily::RESTRICTED {
                if f == Harmonious && !g.is_connected() {
                    continue;
                }
                let canonical = family_colorings(&g, f, None, &OracleBudget::default()).unwrap();
                // colorings with palette {0..n-1}: each canonical one with k
                // colors stands for n!/(n-k)! of them
                let expanded: usize = canonical
                    .iter()
                    .map(|c| (n - c.colors_used() + 1..=n).product::<usize>())
                    .sum();
                let mut raw = 0;
                for code in 0..n.pow(n as u32) {
                    let mut x = code;
                    let colors: Vec<usize> = (0..n)
                        .map(|_| {
                            let c = x % n;
                            x /= n;
                            c
                        })
                        .collect();
                    raw += usize::from(check(f, &g, &primeval::Coloring::from_colors(colors)).unwrap());
                }
                assert_eq!(expanded, raw, "{f} on {g:?}");
            }
        }
    }
}

#[test]
fn family_coloring_listings() {
    let p3 = path(3);
    let all = family_colorings(&p3, Star, None, &OracleBudget::default()).unwrap();
    let listed: Vec<Vec<usize>> = all.iter().map(|c| c.colors().to_vec()).collect();
    assert_eq!(listed, vec![vec![0, 1, 0], vec![0, 1, 2]]);
    let p4 = path(4);
    let rainbow = VertexSet::new(vec![0, 3]);
    for c in family_colorings(&p4, Acyclic, Some(&rainbow), &OracleBudget::default()).unwrap() {
        assert_ne!(c.color(0), c.color(3));
    }
}

#[test]
fn clique_two_coloring_of_generated_members() {
    let mut done = 0;
    for i in 0..400u64 {
        let q = 4 + (i % 4) as usize;
        let (g, _) = generate(&GeneratorSpec::new(GenClass::Qq4 { q }, q, 30, 7000 + i));
        if !g.is_connected() {
            continue;
        }
        let c = two_clique_color(&g, QValue { q }).unwrap();
        assert!(check(Clique, &g, &c).unwrap());
        done += 1;
    }
    assert!(done > 100);
}
