//! Modules, maximal homogeneous sets and the characteristic graph.

use fixedbitset::FixedBitSet;

use crate::graph::{Graph, VertexSet};

/// Every vertex outside `set` sees all of it or none of it.
pub fn is_module(g: &Graph, set: &VertexSet) -> bool {
    if set.is_empty() {
        return false;
    }
    let bits = set.to_bits(g.n());
    (0..g.n()).filter(|v| !bits.contains(*v)).all(|v| {
        let seen = g.neighbor_bits(v).intersection(&bits).count();
        seen == 0 || seen == set.len()
    })
}

/// Smallest module containing `seed`.
fn module_closure(g: &Graph, seed: &[usize]) -> FixedBitSet {
    let n = g.n();
    let mut m = FixedBitSet::with_capacity(n);
    for &v in seed {
        m.insert(v);
    }
    let mut size = seed.len();
    loop {
        let mut grew = false;
        for v in 0..n {
            if m.contains(v) {
                continue;
            }
            let seen = g.neighbor_bits(v).intersection(&m).count();
            if seen != 0 && seen != size {
                m.insert(v);
                size += 1;
                grew = true;
            }
        }
        if !grew {
            return m;
        }
    }
}

/// The maximal strong modules: connected components, co-components, or,
/// when the graph is connected and co-connected, the maximal proper modules.
/// Always a partition of the vertex set, sorted by least vertex.
pub fn maximal_strong_modules(g: &Graph) -> Vec<VertexSet> {
    let n = g.n();
    if n <= 1 {
        return if n == 0 { Vec::new() } else { vec![g.vertices()] };
    }
    let comps = g.connected_components();
    if comps.len() > 1 {
        return comps;
    }
    let cocomps = g.complement().connected_components();
    if cocomps.len() > 1 {
        return cocomps;
    }
    // Prime root: proper modules never straddle two children, so u and v share
    // a child exactly when their module closure stays proper.
    let mut block_of: Vec<Option<usize>> = vec![None; n];
    let mut blocks: Vec<VertexSet> = Vec::new();
    for u in 0..n {
        if block_of[u].is_some() {
            continue;
        }
        let mut members = vec![u];
        for (v, block) in block_of.iter().enumerate().skip(u + 1) {
            if block.is_some() {
                continue;
            }
            if module_closure(g, &[u, v]).count_ones(..) < n {
                members.push(v);
            }
        }
        let id = blocks.len();
        for &v in &members {
            block_of[v] = Some(id);
        }
        blocks.push(VertexSet::new(members));
    }
    blocks
}

/// Maximal homogeneous sets: the maximal strong modules with `1 < |M| < n`.
pub fn homogeneous_sets(g: &Graph) -> Vec<VertexSet> {
    let n = g.n();
    maximal_strong_modules(g)
        .into_iter()
        .filter(|m| m.len() > 1 && m.len() < n)
        .collect()
}

/// The graph obtained by shrinking each maximal homogeneous set to one vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CharacteristicGraph {
    pub graph: Graph,
    /// `blocks[i]` is the vertex set of `g` represented by vertex `i`.
    pub blocks: Vec<VertexSet>,
}

impl CharacteristicGraph {
    /// Which quotient vertex stands for `v`.
    pub fn block_of(&self, v: usize) -> usize {
        self.blocks
            .iter()
            .position(|b| b.contains(v))
            .expect("blocks partition the vertex set")
    }
}

pub fn characteristic_graph(g: &Graph) -> CharacteristicGraph {
    let blocks = maximal_strong_modules(g);
    let reps: Vec<usize> = blocks.iter().map(|b| b.as_slice()[0]).collect();
    let (graph, _) = g.induced_unchecked(&reps);
    CharacteristicGraph { graph, blocks }
}
