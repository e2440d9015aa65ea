use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::decomposition::{
    is_p4_tidy, is_p_connected, is_qq4, is_qq4_exhaustive, separable_bipartition, DecompositionTree, LeafReason,
    Mode, NodeKind, PairKind, Replacement, SeparableComponent, Side, SpiderPartition, Thickness, TreeNode,
};
use crate::graph::{named, Graph, VertexSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "class", rename_all = "snake_case")]
pub enum GenClass {
    Cograph,
    /// The (5,1)-graphs.
    P4Sparse,
    Qq4 { q: usize },
    P4Tidy,
}

impl GenClass {
    pub fn mode(self) -> Mode {
        match self {
            GenClass::Cograph => Mode::Qq4 { q: 4 },
            GenClass::P4Sparse => Mode::Qq4 { q: 5 },
            GenClass::Qq4 { q } => Mode::Qq4 { q },
            GenClass::P4Tidy => Mode::P4Tidy,
        }
    }

    pub fn contains(self, g: &Graph) -> bool {
        match self.mode() {
            Mode::P4Tidy => is_p4_tidy(g),
            Mode::Qq4 { q } if g.n() <= 12 => is_qq4_exhaustive(g, q),
            Mode::Qq4 { q } => is_qq4(g, q),
        }
    }
}

/// Relative frequency of each node kind; kinds that do not apply to the
/// class or size at hand are skipped.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OpWeights {
    pub union: u32,
    pub join: u32,
    pub spider: u32,
    pub quasi_spider: u32,
    pub separable: u32,
    pub small_leaf: u32,
}

impl Default for OpWeights {
    fn default() -> Self {
        OpWeights {
            union: 2,
            join: 2,
            spider: 3,
            quasi_spider: 2,
            separable: 3,
            small_leaf: 2,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    pub class: GenClass,
    pub min_n: usize,
    pub max_n: usize,
    pub seed: u64,
    pub weights: OpWeights,
}

impl GeneratorSpec {
    pub fn new(class: GenClass, min_n: usize, max_n: usize, seed: u64) -> Self {
        GeneratorSpec {
            class,
            min_n,
            max_n,
            seed,
            weights: OpWeights::default(),
        }
    }
}

const MAX_ATTEMPTS: usize = 10_000;

/// A random member of the class together with the tree it was assembled
/// from, with vertices shuffled.
pub fn generate(spec: &GeneratorSpec) -> (Graph, DecompositionTree) {
    assert!(spec.min_n >= 1 && spec.min_n <= spec.max_n, "bad size range");
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    for _ in 0..MAX_ATTEMPTS {
        let n = rng.gen_range(spec.min_n..=spec.max_n);
        let mut b = Builder {
            rng: &mut rng,
            class: spec.class,
            weights: spec.weights,
            next_vertex: 0,
            edges: Vec::new(),
            nodes: Vec::new(),
        };
        b.node(n);
        let (edges, nodes) = (b.edges, b.nodes);
        let mut perm: Vec<usize> = (0..n).collect();
        perm.shuffle(&mut rng);
        let g = Graph::from_edges(n, edges.iter().map(|&(u, v)| (perm[u], perm[v]))).expect("edges in range");
        if !spec.class.contains(&g) {
            continue;
        }
        let tree = DecompositionTree::from_parts(spec.class.mode(), n, nodes, 0).relabel(&perm);
        debug_assert_eq!(tree.check_against(&g), Ok(()));
        return (g, tree);
    }
    panic!("no class member generated for {spec:?}");
}

#[derive(Clone, Copy)]
enum Op {
    Union,
    Join,
    Spider,
    QuasiSpider,
    Separable,
    SmallLeaf,
}

struct Builder<'r> {
    rng: &'r mut ChaCha8Rng,
    class: GenClass,
    weights: OpWeights,
    next_vertex: usize,
    edges: Vec<(usize, usize)>,
    nodes: Vec<TreeNode>,
}

impl Builder<'_> {
    fn alloc(&mut self, count: usize) -> Vec<usize> {
        let out = (self.next_vertex..self.next_vertex + count).collect();
        self.next_vertex += count;
        out
    }

    fn placeholder(&mut self) -> usize {
        self.nodes.push(TreeNode {
            id: self.nodes.len(),
            vertices: VertexSet::empty(),
            kind: NodeKind::Union,
            children: Vec::new(),
        });
        self.nodes.len() - 1
    }

    fn q(&self) -> Option<usize> {
        match self.class.mode() {
            Mode::Qq4 { q } => Some(q),
            Mode::P4Tidy => None,
        }
    }

    /// Spider sizes whose legs alone stay within the P4 allowance.
    fn max_legs(&self, n: usize) -> usize {
        let cap = n / 2;
        match self.q() {
            Some(q) => (2..=cap)
                .take_while(|&k| {
                    let legs = (q / 2).min(k);
                    legs * (legs - 1) / 2 + 4 <= q
                })
                .last()
                .unwrap_or(0),
            None => cap,
        }
    }

    fn pick(&mut self, n: usize) -> Op {
        let w = self.weights;
        let cograph = self.class == GenClass::Cograph;
        let tidy = self.class == GenClass::P4Tidy;
        let qq4 = matches!(self.class, GenClass::Qq4 { .. });
        let q = self.q().unwrap_or(0);
        let mut options = vec![(Op::Union, w.union), (Op::Join, w.join)];
        if !cograph && self.max_legs(n) >= 2 {
            options.push((Op::Spider, w.spider));
        }
        if tidy && n >= 5 {
            options.push((Op::QuasiSpider, w.quasi_spider));
        }
        if qq4 && n >= 5 && q >= 4 {
            options.push((Op::Separable, w.separable));
        }
        if (qq4 && (4..=q).contains(&n)) || (tidy && n == 5) {
            options.push((Op::SmallLeaf, w.small_leaf));
        }
        options.retain(|o| o.1 > 0);
        if options.is_empty() {
            return Op::Union;
        }
        let total: u32 = options.iter().map(|o| o.1).sum();
        let mut roll = self.rng.gen_range(0..total);
        for (op, weight) in options {
            if roll < weight {
                return op;
            }
            roll -= weight;
        }
        unreachable!()
    }

    fn node(&mut self, n: usize) -> usize {
        let id = self.placeholder();
        if n == 1 {
            let v = self.alloc(1);
            self.nodes[id].vertices = VertexSet::new(v);
            self.nodes[id].kind = NodeKind::Leaf {
                reason: LeafReason::K1,
                edges: Vec::new(),
            };
            return id;
        }
        match self.pick(n) {
            Op::Union => self.combine(id, n, false),
            Op::Join => self.combine(id, n, true),
            Op::Spider => self.spider(id, n, false),
            Op::QuasiSpider => self.spider(id, n, true),
            Op::Separable => self.separable(id, n),
            Op::SmallLeaf => self.small_leaf(id, n),
        }
        id
    }

    fn combine(&mut self, id: usize, n: usize, join: bool) {
        let parts = self.rng.gen_range(2..=n.min(3));
        let mut cuts: Vec<usize> = (1..n).collect();
        cuts.shuffle(self.rng);
        let mut cuts: Vec<usize> = cuts[..parts - 1].to_vec();
        cuts.sort_unstable();
        cuts.insert(0, 0);
        cuts.push(n);
        let mut groups: Vec<Vec<usize>> = Vec::new();
        for w in cuts.windows(2) {
            let child = self.node(w[1] - w[0]);
            self.nodes[id].children.push(child);
            groups.push(self.nodes[child].vertices.as_slice().to_vec());
        }
        if join {
            for (i, a) in groups.iter().enumerate() {
                for b in &groups[i + 1..] {
                    for &u in a {
                        for &v in b {
                            self.edges.push((u, v));
                        }
                    }
                }
            }
        }
        self.nodes[id].vertices = groups.into_iter().flatten().collect();
        self.nodes[id].kind = if join { NodeKind::Join } else { NodeKind::Union };
    }

    fn spider(&mut self, id: usize, n: usize, quasi: bool) {
        let extra = usize::from(quasi);
        let k = self.rng.gen_range(2..=self.max_legs(n - extra).max(2));
        let r = n - 2 * k - extra;
        let mut head = VertexSet::empty();
        if r > 0 {
            let child = self.node(r);
            self.nodes[id].children.push(child);
            head = self.nodes[child].vertices.clone();
        }
        let clique = self.alloc(k);
        let stable = self.alloc(k);
        let thickness = if self.rng.gen_bool(0.5) {
            Thickness::Thin
        } else {
            Thickness::Thick
        };
        let mut part = SpiderPartition {
            head,
            clique,
            stable,
            thickness,
            replaced: None,
        };
        if quasi {
            let side = if self.rng.gen_bool(0.5) { Side::InC } else { Side::InS };
            let kind = if self.rng.gen_bool(0.5) {
                PairKind::K2
            } else {
                PairKind::K2Bar
            };
            let slot = self.rng.gen_range(0..k);
            let twin = self.alloc(1)[0];
            let list = match side {
                Side::InC => &mut part.clique,
                Side::InS => &mut part.stable,
            };
            let pair = (list[slot], twin);
            list.push(twin);
            part.replaced = Some(Replacement { side, kind, pair });
        }
        let vs = part.vertices();
        let vs = vs.as_slice();
        for (i, &u) in vs.iter().enumerate() {
            for &v in &vs[i + 1..] {
                if part.forced_adjacency(u, v) == Some(true) {
                    self.edges.push((u, v));
                }
            }
        }
        self.nodes[id].vertices = part.vertices();
        self.nodes[id].kind = if quasi {
            NodeKind::QuasiSpider { partition: part }
        } else {
            NodeKind::Spider { partition: part }
        };
    }

    fn random_graph(&mut self, n: usize, p: f64) -> Graph {
        let mut g = Graph::new(n);
        for u in 0..n {
            for v in u + 1..n {
                if self.rng.gen_bool(p) {
                    g.add_edge(u, v).expect("in range");
                }
            }
        }
        g
    }

    /// A p-connected graph on `h` vertices with a separable bipartition.
    fn separable_graph(&mut self, h: usize) -> Option<(Graph, VertexSet, VertexSet)> {
        for _ in 0..500 {
            let g = if self.rng.gen_bool(0.5) {
                // split graph: a clique on a prefix, random edges to the rest
                let k = self.rng.gen_range(1..h);
                let mut g = self.random_graph(h, 0.5);
                for u in 0..h {
                    for v in u + 1..h {
                        let want = if v < k {
                            true
                        } else if u >= k {
                            false
                        } else {
                            g.has_edge(u, v)
                        };
                        if want != g.has_edge(u, v) {
                            g = toggle(&g, u, v);
                        }
                    }
                }
                g
            } else {
                self.random_graph(h, 0.5)
            };
            if !is_p_connected(&g) {
                continue;
            }
            if let Ok(Some((h1, h2))) = separable_bipartition(&g) {
                return Some((g, h1, h2));
            }
        }
        None
    }

    fn separable(&mut self, id: usize, n: usize) {
        let q = self.q().expect("separable nodes only occur in (q,q-4) classes");
        let mut size = self.rng.gen_range(4..=q.min(n - 1));
        let (hg, h1, h2) = match self.separable_graph(size) {
            Some(found) => found,
            None => {
                size = 4;
                let p4 = named::path(4);
                (p4, VertexSet::new(vec![1, 2]), VertexSet::new(vec![0, 3]))
            }
        };
        let map = self.alloc(size);
        let h1: VertexSet = h1.iter().map(|v| map[v]).collect();
        let h2: VertexSet = h2.iter().map(|v| map[v]).collect();
        let h_edges: Vec<(usize, usize)> = hg.edges().map(|(u, v)| (map[u], map[v])).collect();
        self.edges.extend(&h_edges);
        let child = self.node(n - size);
        self.nodes[id].children.push(child);
        let rest = self.nodes[child].vertices.clone();
        for a in rest.iter() {
            for v in h1.iter() {
                self.edges.push((a, v));
            }
        }
        let hv = VertexSet::new(map);
        self.nodes[id].vertices = hv.union(&rest);
        self.nodes[id].kind = NodeKind::Separable {
            component: SeparableComponent {
                vertices: hv,
                h1,
                h2,
                edges: h_edges,
            },
        };
    }

    fn small_leaf(&mut self, id: usize, n: usize) {
        let (g, reason) = if self.class == GenClass::P4Tidy {
            let (g, reason) = match self.rng.gen_range(0..3) {
                0 => (named::path(5), LeafReason::P5),
                1 => (named::path(5).complement(), LeafReason::P5Bar),
                _ => (named::cycle(5), LeafReason::C5),
            };
            (g, reason)
        } else {
            let mut found = None;
            for _ in 0..200 {
                let g = self.random_graph(n, 0.5);
                if g.is_connected() && g.complement().is_connected() {
                    found = Some(g);
                    break;
                }
            }
            let g = found.unwrap_or_else(|| if n == 4 { named::path(4) } else { named::cycle(n) });
            (g, LeafReason::SmallQ)
        };
        let map = self.alloc(n);
        let mut edges: Vec<(usize, usize)> = g.edges().map(|(u, v)| (map[u], map[v])).collect();
        edges.sort_unstable();
        self.edges.extend(&edges);
        self.nodes[id].vertices = VertexSet::new(map);
        self.nodes[id].kind = NodeKind::Leaf { reason, edges };
    }
}

fn toggle(g: &Graph, u: usize, v: usize) -> Graph {
    let edges = g.edges().filter(|&e| e != (u, v));
    let mut out = Graph::from_edges(g.n(), edges).expect("in range");
    if !g.has_edge(u, v) {
        out.add_edge(u, v).expect("in range");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cographs_are_p4_free() {
        for seed in 0..20 {
            let (g, t) = generate(&GeneratorSpec::new(GenClass::Cograph, 6, 6, seed));
            assert_eq!(g.n(), 6);
            assert_eq!(g.p4_count(), 0);
            assert_eq!(t.check_against(&g), Ok(()));
        }
    }

    #[test]
    fn same_seed_same_graph() {
        let spec = GeneratorSpec::new(GenClass::Qq4 { q: 7 }, 5, 10, 42);
        assert_eq!(generate(&spec), generate(&spec));
    }

    #[test]
    fn tidy_spider_weight() {
        let mut spec = GeneratorSpec::new(GenClass::P4Tidy, 6, 9, 3);
        spec.weights = OpWeights {
            union: 0,
            join: 0,
            spider: 1,
            quasi_spider: 1,
            separable: 0,
            small_leaf: 0,
        };
        let (g, t) = generate(&spec);
        assert!(matches!(t.root().kind, NodeKind::Spider { .. } | NodeKind::QuasiSpider { .. }));
        assert!(is_p4_tidy(&g));
    }

    #[test]
    fn qq4_members_pass_the_subset_check() {
        for seed in 0..30 {
            let (g, t) = generate(&GeneratorSpec::new(GenClass::Qq4 { q: 7 }, 4, 10, seed));
            assert!(is_qq4_exhaustive(&g, 7));
            assert_eq!(t.check_against(&g), Ok(()));
        }
    }
}
