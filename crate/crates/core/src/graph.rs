//! Simple undirected graphs over dense vertex indices.
//!
//! Adjacency is kept as one bit set per vertex; most of the crate works on
//! vertex subsets (modules, cliques, P4s), so set operations dominate.

use std::fmt;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("self-loop on vertex {0}")]
    SelfLoop(usize),
    #[error("vertex set is empty")]
    EmptyVertexSet,
    #[error("expected {expected} labels, got {got}")]
    LabelCount { expected: usize, got: usize },
}

/// A sorted, duplicate-free set of vertex indices of some parent graph.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexSet(Vec<usize>);

impl VertexSet {
    pub fn new(mut vertices: Vec<usize>) -> Self {
        vertices.sort_unstable();
        vertices.dedup();
        VertexSet(vertices)
    }

    pub fn empty() -> Self {
        VertexSet(Vec::new())
    }

    pub fn singleton(v: usize) -> Self {
        VertexSet(vec![v])
    }

    pub fn from_bits(bits: &FixedBitSet) -> Self {
        VertexSet(bits.ones().collect())
    }

    pub fn to_bits(&self, n: usize) -> FixedBitSet {
        let mut bits = FixedBitSet::with_capacity(n);
        for &v in &self.0 {
            bits.insert(v);
        }
        bits
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<usize> {
        self.0
    }

    /// Position of `v` inside the sorted set.
    pub fn position(&self, v: usize) -> Option<usize> {
        self.0.binary_search(&v).ok()
    }

    pub fn union(&self, other: &VertexSet) -> VertexSet {
        VertexSet::new(self.0.iter().chain(other.0.iter()).copied().collect())
    }

    pub fn difference(&self, other: &VertexSet) -> VertexSet {
        VertexSet(self.0.iter().copied().filter(|v| !other.contains(*v)).collect())
    }

    pub fn is_subset(&self, other: &VertexSet) -> bool {
        self.0.iter().all(|&v| other.contains(v))
    }
}

impl FromIterator<usize> for VertexSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        VertexSet::new(iter.into_iter().collect())
    }
}

impl fmt::Display for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

/// Simple undirected graph: no loops, no parallel edges, vertices `0..n`.
#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<FixedBitSet>,
    labels: Option<Vec<String>>,
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph")
            .field("n", &self.n())
            .field("edges", &self.edges().collect::<Vec<_>>())
            .finish()
    }
}

impl Graph {
    pub fn new(n: usize) -> Self {
        Graph {
            adj: vec![FixedBitSet::with_capacity(n); n],
            labels: None,
        }
    }

    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut g = Graph::new(n);
        for (u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    /// Adds `uv`; adding an existing edge is a no-op.
    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<(), GraphError> {
        let n = self.n();
        for w in [u, v] {
            if w >= n {
                return Err(GraphError::VertexOutOfRange { vertex: w, n });
            }
        }
        if u == v {
            return Err(GraphError::SelfLoop(u));
        }
        self.adj[u].insert(v);
        self.adj[v].insert(u);
        Ok(())
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self, GraphError> {
        if labels.len() != self.n() {
            return Err(GraphError::LabelCount {
                expected: self.n(),
                got: labels.len(),
            });
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|row| row.count_ones(..)).sum::<usize>() / 2
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].contains(v)
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.adj[v].ones()
    }

    pub fn neighbor_bits(&self, v: usize) -> &FixedBitSet {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].count_ones(..)
    }

    pub fn vertices(&self) -> VertexSet {
        VertexSet((0..self.n()).collect())
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n()).flat_map(move |u| self.adj[u].ones().filter(move |&v| v > u).map(move |v| (u, v)))
    }

    /// Adjacency rows as `u64` masks. Only valid for `n <= 64`.
    pub fn masks(&self) -> Vec<u64> {
        assert!(self.n() <= 64, "mask adjacency needs n <= 64");
        self.adj
            .iter()
            .map(|row| row.ones().fold(0u64, |m, v| m | (1 << v)))
            .collect()
    }

    /// Induced subgraph on `s`; the returned vector maps new indices to old ones.
    pub fn induced_subgraph(&self, s: &VertexSet) -> Result<(Graph, Vec<usize>), GraphError> {
        if s.is_empty() {
            return Err(GraphError::EmptyVertexSet);
        }
        if let Some(&bad) = s.as_slice().iter().find(|&&v| v >= self.n()) {
            return Err(GraphError::VertexOutOfRange { vertex: bad, n: self.n() });
        }
        Ok(self.induced_unchecked(s.as_slice()))
    }

    /// Like [`Graph::induced_subgraph`] but accepts an empty set and any order.
    pub(crate) fn induced_unchecked(&self, vertices: &[usize]) -> (Graph, Vec<usize>) {
        let mut g = Graph::new(vertices.len());
        for (i, &u) in vertices.iter().enumerate() {
            for (j, &v) in vertices.iter().enumerate().skip(i + 1) {
                if self.has_edge(u, v) {
                    g.adj[i].insert(j);
                    g.adj[j].insert(i);
                }
            }
        }
        if let Some(labels) = &self.labels {
            g.labels = Some(vertices.iter().map(|&v| labels[v].clone()).collect());
        }
        (g, vertices.to_vec())
    }

    pub fn complement(&self) -> Graph {
        let n = self.n();
        let adj = (0..n)
            .map(|v| {
                let mut row = self.adj[v].clone();
                row.toggle_range(..);
                row.set(v, false);
                row
            })
            .collect();
        Graph {
            adj,
            labels: self.labels.clone(),
        }
    }

    /// Disjoint union; vertices of `g2` are shifted by `g1.n()`.
    pub fn disjoint_union(g1: &Graph, g2: &Graph) -> Graph {
        Self::combine(g1, g2, false)
    }

    /// Join; vertices of `g2` are shifted by `g1.n()`.
    pub fn join(g1: &Graph, g2: &Graph) -> Graph {
        Self::combine(g1, g2, true)
    }

    fn combine(g1: &Graph, g2: &Graph, cross: bool) -> Graph {
        let (n1, n2) = (g1.n(), g2.n());
        let mut g = Graph::new(n1 + n2);
        for (u, v) in g1.edges() {
            g.adj[u].insert(v);
            g.adj[v].insert(u);
        }
        for (u, v) in g2.edges() {
            g.adj[u + n1].insert(v + n1);
            g.adj[v + n1].insert(u + n1);
        }
        if cross {
            for u in 0..n1 {
                for v in n1..n1 + n2 {
                    g.adj[u].insert(v);
                    g.adj[v].insert(u);
                }
            }
        }
        g
    }

    pub fn connected_components(&self) -> Vec<VertexSet> {
        let n = self.n();
        let mut seen = FixedBitSet::with_capacity(n);
        let mut parts = Vec::new();
        for start in 0..n {
            if seen.contains(start) {
                continue;
            }
            seen.insert(start);
            let mut stack = vec![start];
            let mut part = vec![start];
            while let Some(u) = stack.pop() {
                for v in self.adj[u].ones() {
                    if !seen.contains(v) {
                        seen.insert(v);
                        stack.push(v);
                        part.push(v);
                    }
                }
            }
            parts.push(VertexSet::new(part));
        }
        parts
    }

    pub fn is_connected(&self) -> bool {
        self.n() <= 1 || self.connected_components().len() == 1
    }

    /// Every induced P4 `w-x-y-z`, once each, oriented so that `w < z`.
    pub fn enumerate_p4s(&self) -> Vec<[usize; 4]> {
        let n = self.n();
        let mut out = Vec::new();
        for x in 0..n {
            for y in self.adj[x].ones() {
                // w ~ x only, z ~ y only, w !~ z
                for w in self.adj[x].ones() {
                    if w == y || self.adj[y].contains(w) {
                        continue;
                    }
                    for z in self.adj[y].ones() {
                        if z == x || z <= w || self.adj[x].contains(z) || self.adj[w].contains(z) {
                            continue;
                        }
                        out.push([w, x, y, z]);
                    }
                }
            }
        }
        out.sort_unstable();
        out
    }

    pub fn p4_count(&self) -> usize {
        self.enumerate_p4s().len()
    }

    /// Whether the four given vertices induce a P4.
    pub fn induces_p4(&self, quad: [usize; 4]) -> bool {
        let mut edges = 0;
        let mut deg = [0u8; 4];
        for i in 0..4 {
            for j in i + 1..4 {
                if self.has_edge(quad[i], quad[j]) {
                    edges += 1;
                    deg[i] += 1;
                    deg[j] += 1;
                }
            }
        }
        if edges != 3 {
            return false;
        }
        deg.sort_unstable();
        deg == [1, 1, 2, 2]
    }

    /// All inclusion-maximal cliques (pivoting Bron–Kerbosch), sorted.
    pub fn maximal_cliques(&self) -> Vec<VertexSet> {
        let n = self.n();
        let mut out = Vec::new();
        let mut p = FixedBitSet::with_capacity(n);
        p.insert_range(..);
        let x = FixedBitSet::with_capacity(n);
        self.bron_kerbosch(&mut Vec::new(), p, x, &mut out);
        out.sort();
        out
    }

    fn bron_kerbosch(&self, r: &mut Vec<usize>, mut p: FixedBitSet, mut x: FixedBitSet, out: &mut Vec<VertexSet>) {
        if p.is_clear() {
            if x.is_clear() && !r.is_empty() {
                out.push(VertexSet::new(r.clone()));
            }
            return;
        }
        let pivot = p
            .union(&x)
            .max_by_key(|&u| self.adj[u].intersection(&p).count())
            .expect("p is nonempty");
        let mut candidates = p.clone();
        candidates.difference_with(&self.adj[pivot]);
        for v in candidates.ones() {
            let mut np = p.clone();
            np.intersect_with(&self.adj[v]);
            let mut nx = x.clone();
            nx.intersect_with(&self.adj[v]);
            r.push(v);
            self.bron_kerbosch(r, np, nx, out);
            r.pop();
            p.set(v, false);
            x.insert(v);
        }
    }

    pub fn is_clique(&self, s: &VertexSet) -> bool {
        let vs = s.as_slice();
        vs.iter()
            .enumerate()
            .all(|(i, &u)| vs[i + 1..].iter().all(|&v| self.has_edge(u, v)))
    }

    pub fn is_stable(&self, s: &VertexSet) -> bool {
        let vs = s.as_slice();
        vs.iter()
            .enumerate()
            .all(|(i, &u)| vs[i + 1..].iter().all(|&v| !self.has_edge(u, v)))
    }

    /// Whether the vertex set splits into a clique and a stable set.
    pub fn is_split(&self) -> bool {
        split_partition(self).is_some()
    }
}

/// Some `(clique, stable)` partition of a split graph.
pub fn split_partition(g: &Graph) -> Option<(VertexSet, VertexSet)> {
    // Hammer–Simeone: with degrees sorted non-increasingly, take the largest m
    // such that d_m >= m - 1; the first m vertices form a maximum clique side.
    let n = g.n();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| (std::cmp::Reverse(g.degree(v)), v));
    let m = (0..n).take_while(|&i| g.degree(order[i]) >= i).count();
    let clique = VertexSet::new(order[..m].to_vec());
    let stable = VertexSet::new(order[m..].to_vec());
    (g.is_clique(&clique) && g.is_stable(&stable)).then_some((clique, stable))
}

/// A few named graphs used throughout tests, fixtures and the generator.
pub mod named {
    use super::Graph;

    pub fn path(n: usize) -> Graph {
        Graph::from_edges(n, (1..n).map(|i| (i - 1, i))).expect("valid path")
    }

    pub fn cycle(n: usize) -> Graph {
        assert!(n >= 3);
        Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n))).expect("valid cycle")
    }

    pub fn complete(n: usize) -> Graph {
        Graph::new(n).complement()
    }

    pub fn empty(n: usize) -> Graph {
        Graph::new(n)
    }

    pub fn complete_bipartite(a: usize, b: usize) -> Graph {
        Graph::join(&empty(a), &empty(b))
    }

    pub fn star(leaves: usize) -> Graph {
        complete_bipartite(1, leaves)
    }
}
