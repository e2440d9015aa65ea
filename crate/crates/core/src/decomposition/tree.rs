use std::fmt;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::graph::{named, Graph, VertexSet};

use super::classes::{exhaustive_profile, max_plus, spider_body_profile};
use super::pconn::{p_components, separable_bipartition};
use super::spider::{recognize_quasi_spider, recognize_spider, SpiderPartition};
use super::DecompositionError;

/// Largest small component whose P4 profile is computed by subset enumeration.
pub const LEAF_PROFILE_MAX_VERTICES: usize = super::classes::EXHAUSTIVE_Q_MAX_VERTICES;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "class", rename_all = "snake_case")]
pub enum Mode {
    /// (q, q-4)-graphs for a fixed `q >= 4`.
    Qq4 { q: usize },
    P4Tidy,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mode::Qq4 { q } => write!(f, "({q},{})-graph", *q as isize - 4),
            Mode::P4Tidy => f.write_str("P4-tidy"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum LeafReason {
    #[serde(rename = "small_q")]
    SmallQ,
    P5,
    #[serde(rename = "P5bar")]
    P5Bar,
    C5,
    K1,
    #[serde(rename = "empty")]
    Empty,
}

/// A separable p-component `H = H1 ∪ H2` whose complement in the node is
/// complete to `H1` and anticomplete to `H2`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeparableComponent {
    pub vertices: VertexSet,
    pub h1: VertexSet,
    pub h2: VertexSet,
    /// Edges inside `H`.
    pub edges: Vec<(usize, usize)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum NodeKind {
    Union,
    Join,
    /// The only child, if any, is the head `R`.
    Spider { partition: SpiderPartition },
    QuasiSpider { partition: SpiderPartition },
    /// The only child is the rest of the node outside `H`.
    Separable { component: SeparableComponent },
    Leaf { reason: LeafReason, edges: Vec<(usize, usize)> },
}

impl NodeKind {
    pub fn name(&self) -> &'static str {
        match self {
            NodeKind::Union => "union",
            NodeKind::Join => "join",
            NodeKind::Spider { .. } => "spider",
            NodeKind::QuasiSpider { .. } => "quasi_spider",
            NodeKind::Separable { .. } => "separable",
            NodeKind::Leaf { .. } => "leaf",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeNode {
    pub id: usize,
    pub vertices: VertexSet,
    #[serde(flatten)]
    pub kind: NodeKind,
    pub children: Vec<usize>,
}

/// Where and why a graph fell outside the requested class.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rejection {
    pub mode: Mode,
    /// Vertex set of the subgraph at which decomposition got stuck.
    pub vertices: VertexSet,
    pub reason: String,
}

impl fmt::Display for Rejection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "not a {}: {} (at vertices {})", self.mode, self.reason, self.vertices)
    }
}

/// Nodes are stored in preorder; node 0 is the root.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompositionTree {
    pub mode: Mode,
    pub n: usize,
    pub nodes: Vec<TreeNode>,
}

impl DecompositionTree {
    pub fn root(&self) -> &TreeNode {
        &self.nodes[0]
    }

    pub fn node(&self, id: usize) -> &TreeNode {
        &self.nodes[id]
    }

    /// Builds a tree from nodes given in any order with `root` first after
    /// renumbering; used by the instance generator.
    pub(crate) fn from_parts(mode: Mode, n: usize, nodes: Vec<TreeNode>, root: usize) -> Self {
        let mut order = Vec::with_capacity(nodes.len());
        let mut stack = vec![root];
        while let Some(id) = stack.pop() {
            order.push(id);
            stack.extend(nodes[id].children.iter().rev());
        }
        let mut new_id = vec![usize::MAX; nodes.len()];
        for (i, &old) in order.iter().enumerate() {
            new_id[old] = i;
        }
        let nodes = order
            .iter()
            .map(|&old| {
                let mut node = nodes[old].clone();
                node.id = new_id[old];
                node.children = node.children.iter().map(|&c| new_id[c]).collect();
                node
            })
            .collect();
        DecompositionTree { mode, n, nodes }
    }

    /// Renames every vertex `v` to `perm[v]`.
    pub fn relabel(&self, perm: &[usize]) -> DecompositionTree {
        let map_set = |s: &VertexSet| s.iter().map(|v| perm[v]).collect::<VertexSet>();
        let map_edges = |e: &[(usize, usize)]| {
            let mut out: Vec<(usize, usize)> = e
                .iter()
                .map(|&(u, v)| (perm[u].min(perm[v]), perm[u].max(perm[v])))
                .collect();
            out.sort_unstable();
            out
        };
        let nodes = self
            .nodes
            .iter()
            .map(|node| TreeNode {
                id: node.id,
                vertices: map_set(&node.vertices),
                children: node.children.clone(),
                kind: match &node.kind {
                    NodeKind::Spider { partition } => NodeKind::Spider {
                        partition: partition.relabel(perm),
                    },
                    NodeKind::QuasiSpider { partition } => NodeKind::QuasiSpider {
                        partition: partition.relabel(perm),
                    },
                    NodeKind::Separable { component } => NodeKind::Separable {
                        component: SeparableComponent {
                            vertices: map_set(&component.vertices),
                            h1: map_set(&component.h1),
                            h2: map_set(&component.h2),
                            edges: map_edges(&component.edges),
                        },
                    },
                    NodeKind::Leaf { reason, edges } => NodeKind::Leaf {
                        reason: *reason,
                        edges: map_edges(edges),
                    },
                    other => other.clone(),
                },
            })
            .collect();
        DecompositionTree {
            mode: self.mode,
            n: self.n,
            nodes,
        }
    }

    /// The edges of a node's subgraph, recovered from the tree alone.
    pub fn subtree_edges(&self, id: usize) -> Vec<(usize, usize)> {
        let node = &self.nodes[id];
        let mut edges: Vec<(usize, usize)> = node.children.iter().flat_map(|&c| self.subtree_edges(c)).collect();
        let mut push = |u: usize, v: usize| edges.push((u.min(v), u.max(v)));
        match &node.kind {
            NodeKind::Union => {}
            NodeKind::Join => {
                for (i, &a) in node.children.iter().enumerate() {
                    for &b in &node.children[i + 1..] {
                        for u in self.nodes[a].vertices.iter() {
                            for v in self.nodes[b].vertices.iter() {
                                push(u, v);
                            }
                        }
                    }
                }
            }
            NodeKind::Spider { partition } | NodeKind::QuasiSpider { partition } => {
                let vs = partition.vertices();
                let vs = vs.as_slice();
                for (i, &u) in vs.iter().enumerate() {
                    for &v in &vs[i + 1..] {
                        if partition.forced_adjacency(u, v) == Some(true) {
                            push(u, v);
                        }
                    }
                }
            }
            NodeKind::Separable { component } => {
                for &(u, v) in &component.edges {
                    push(u, v);
                }
                let rest = node.vertices.difference(&component.vertices);
                for u in rest.iter() {
                    for v in component.h1.iter() {
                        push(u, v);
                    }
                }
            }
            NodeKind::Leaf { edges: leaf, .. } => {
                for &(u, v) in leaf {
                    push(u, v);
                }
            }
        }
        edges.sort_unstable();
        edges.dedup();
        edges
    }

    /// The whole graph, recovered from the tree alone.
    pub fn reassemble(&self) -> Graph {
        Graph::from_edges(self.n, self.subtree_edges(0)).expect("tree edges are in range")
    }

    /// Checks that every node's children reassemble into exactly the node's
    /// induced subgraph of `g`, and that vertex sets nest properly.
    pub fn check_against(&self, g: &Graph) -> Result<(), String> {
        if g.n() != self.n {
            return Err(format!("tree covers {} vertices, graph has {}", self.n, g.n()));
        }
        for node in &self.nodes {
            let child_vertices: VertexSet = node
                .children
                .iter()
                .flat_map(|&c| self.nodes[c].vertices.iter())
                .collect();
            let own = match &node.kind {
                NodeKind::Spider { partition } | NodeKind::QuasiSpider { partition } => {
                    partition.check(g).map_err(|e| format!("node {}: {e}", node.id))?;
                    child_vertices.union(&VertexSet::new(
                        partition.clique.iter().chain(&partition.stable).copied().collect(),
                    ))
                }
                NodeKind::Separable { component } => child_vertices.union(&component.vertices),
                NodeKind::Leaf { .. } => node.vertices.clone(),
                _ => child_vertices,
            };
            if own != node.vertices {
                return Err(format!("node {}: children do not cover the node's vertices", node.id));
            }
            let (sub, map) = g.induced_unchecked(node.vertices.as_slice());
            let mut expected: Vec<(usize, usize)> = sub.edges().map(|(u, v)| (map[u], map[v])).collect();
            expected.sort_unstable();
            if self.subtree_edges(node.id) != expected {
                return Err(format!("node {}: reassembled edges differ from the graph", node.id));
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("tree serializes")
    }

    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph decomposition {\n  node [shape=box, fontname=\"monospace\"];\n");
        for node in &self.nodes {
            let detail = match &node.kind {
                NodeKind::Spider { partition } | NodeKind::QuasiSpider { partition } => format!(
                    "\\n{:?} k={} C={:?} S={:?}",
                    partition.thickness,
                    partition.k(),
                    partition.clique,
                    partition.stable
                ),
                NodeKind::Separable { component } => {
                    format!("\\nH1={} H2={}", component.h1, component.h2)
                }
                NodeKind::Leaf { reason, .. } => format!(" {reason:?}"),
                _ => String::new(),
            };
            let _ = writeln!(
                out,
                "  n{} [label=\"{}{}\\n{}\"];",
                node.id,
                node.kind.name(),
                detail,
                node.vertices
            );
            for &c in &node.children {
                let _ = writeln!(out, "  n{} -> n{};", node.id, c);
            }
        }
        out.push_str("}\n");
        out
    }
}

/// Decomposes `g` for `mode`; fails with a rejection exactly when `g` is not
/// in the class.
pub fn build_tree(g: &Graph, mode: Mode) -> Result<DecompositionTree, DecompositionError> {
    let mut b = Builder {
        g,
        mode,
        nodes: Vec::new(),
        // profiles only matter when some vertex set of more than q vertices exists
        profiles: matches!(mode, Mode::Qq4 { q } if g.n() > q),
    };
    if g.n() == 0 {
        b.nodes.push(TreeNode {
            id: 0,
            vertices: VertexSet::empty(),
            kind: NodeKind::Leaf {
                reason: LeafReason::Empty,
                edges: Vec::new(),
            },
            children: Vec::new(),
        });
    } else {
        b.build(g.vertices())?;
    }
    if let Mode::Qq4 { q } = mode {
        if !b.profiles && g.p4_count() + 4 > q {
            return Err(DecompositionError::Rejected(Rejection {
                mode,
                vertices: g.vertices(),
                reason: format!("{} induced P4s on at most {q} vertices", g.p4_count()),
            }));
        }
    }
    Ok(DecompositionTree {
        mode,
        n: g.n(),
        nodes: b.nodes,
    })
}

struct Builder<'a> {
    g: &'a Graph,
    mode: Mode,
    nodes: Vec<TreeNode>,
    profiles: bool,
}

/// P4 profile of a subtree: entry `m` is the largest number of induced P4s
/// on at most `m` vertices, for `m <= q`. Empty when profiles are off.
type Profile = Vec<usize>;

impl Builder<'_> {
    fn q(&self) -> usize {
        match self.mode {
            Mode::Qq4 { q } => q,
            Mode::P4Tidy => 0,
        }
    }

    fn reject(&self, vertices: &VertexSet, reason: impl Into<String>) -> DecompositionError {
        DecompositionError::Rejected(Rejection {
            mode: self.mode,
            vertices: vertices.clone(),
            reason: reason.into(),
        })
    }

    fn push(&mut self, vertices: VertexSet) -> usize {
        let id = self.nodes.len();
        self.nodes.push(TreeNode {
            id,
            vertices,
            kind: NodeKind::Union,
            children: Vec::new(),
        });
        id
    }

    fn leaf_edges(&self, vs: &VertexSet) -> Vec<(usize, usize)> {
        let (sub, map) = self.g.induced_unchecked(vs.as_slice());
        sub.edges().map(|(u, v)| (map[u], map[v])).collect()
    }

    fn check_profile(&self, vs: &VertexSet, profile: &Profile) -> Result<(), DecompositionError> {
        let q = self.q();
        if self.profiles && profile[q] + 4 > q {
            return Err(self.reject(vs, format!("{} induced P4s on at most {q} vertices", profile[q])));
        }
        Ok(())
    }

    fn small_profile(&self, local: &Graph) -> Result<Profile, DecompositionError> {
        if !self.profiles {
            return Ok(Vec::new());
        }
        if local.n() > LEAF_PROFILE_MAX_VERTICES {
            return Err(DecompositionError::Budget {
                size: local.n(),
                limit: LEAF_PROFILE_MAX_VERTICES,
            });
        }
        Ok(exhaustive_profile(local, self.q()))
    }

    fn combine(&self, parts: &[Profile]) -> Profile {
        if !self.profiles {
            return Vec::new();
        }
        let q = self.q();
        parts.iter().fold(vec![0; q + 1], |acc, p| max_plus(&acc, p, q))
    }

    fn build(&mut self, vs: VertexSet) -> Result<(usize, Profile), DecompositionError> {
        let n = vs.len();
        let id = self.push(vs.clone());
        if n == 1 {
            self.nodes[id].kind = NodeKind::Leaf {
                reason: LeafReason::K1,
                edges: Vec::new(),
            };
            let profile = self.combine(&[]);
            return Ok((id, profile));
        }
        let (local, map) = self.g.induced_unchecked(vs.as_slice());
        let to_global = |s: &VertexSet| s.iter().map(|v| map[v]).collect::<VertexSet>();

        let comps = local.connected_components();
        let (kind, parts) = if comps.len() > 1 {
            (NodeKind::Union, comps)
        } else {
            let cocomps = local.complement().connected_components();
            if cocomps.len() > 1 {
                (NodeKind::Join, cocomps)
            } else {
                (NodeKind::Union, Vec::new())
            }
        };
        if !parts.is_empty() {
            let mut profiles = Vec::new();
            for part in &parts {
                let (child, p) = self.build(to_global(part))?;
                self.nodes[id].children.push(child);
                profiles.push(p);
            }
            self.nodes[id].kind = kind;
            let profile = self.combine(&profiles);
            self.check_profile(&vs, &profile)?;
            return Ok((id, profile));
        }

        match self.mode {
            Mode::P4Tidy => {
                if let Some(part) = recognize_quasi_spider(&local) {
                    let part = part.relabel(&map);
                    if !part.head.is_empty() {
                        let (child, _) = self.build(part.head.clone())?;
                        self.nodes[id].children.push(child);
                    }
                    self.nodes[id].kind = if part.is_quasi() {
                        NodeKind::QuasiSpider { partition: part }
                    } else {
                        NodeKind::Spider { partition: part }
                    };
                    return Ok((id, Vec::new()));
                }
                let reason = small_tidy_leaf(&local).ok_or_else(|| {
                    self.reject(
                        &vs,
                        "connected, co-connected, not a quasi-spider and not one of P5, P5bar, C5",
                    )
                })?;
                self.nodes[id].kind = NodeKind::Leaf {
                    reason,
                    edges: self.leaf_edges(&vs),
                };
                Ok((id, Vec::new()))
            }
            Mode::Qq4 { q } => {
                if let Some(part) = recognize_spider(&local) {
                    let k = part.k();
                    let part = part.relabel(&map);
                    let mut profiles = vec![spider_body_profile(k, q, self.profiles)];
                    if !part.head.is_empty() {
                        let (child, p) = self.build(part.head.clone())?;
                        self.nodes[id].children.push(child);
                        profiles.push(p);
                    }
                    self.nodes[id].kind = NodeKind::Spider { partition: part };
                    let profile = self.combine(&profiles);
                    self.check_profile(&vs, &profile)?;
                    return Ok((id, profile));
                }
                if let Some((h, h1, h2)) = find_separable(&local, q) {
                    let h_graph = local.induced_unchecked(h.as_slice()).0;
                    let h_profile = self.small_profile(&h_graph)?;
                    let component = SeparableComponent {
                        vertices: to_global(&h),
                        h1: to_global(&h1),
                        h2: to_global(&h2),
                        edges: self.leaf_edges(&to_global(&h)),
                    };
                    let rest = vs.difference(&component.vertices);
                    let (child, p) = self.build(rest)?;
                    self.nodes[id].children.push(child);
                    self.nodes[id].kind = NodeKind::Separable { component };
                    let profile = self.combine(&[h_profile, p]);
                    self.check_profile(&vs, &profile)?;
                    return Ok((id, profile));
                }
                if n <= q {
                    let profile = self.small_profile(&local)?;
                    self.check_profile(&vs, &profile)?;
                    self.nodes[id].kind = NodeKind::Leaf {
                        reason: LeafReason::SmallQ,
                        edges: self.leaf_edges(&vs),
                    };
                    return Ok((id, profile));
                }
                Err(self.reject(
                    &vs,
                    format!(
                        "connected, co-connected, not a spider, no usable separable p-component, and more than {q} vertices"
                    ),
                ))
            }
        }
    }
}

/// First p-component (in vertex order) that is separable, has at most `q`
/// vertices, whose outside is complete to `H1` and anticomplete to `H2`, and
/// shares no induced P4 with the outside.
fn find_separable(local: &Graph, q: usize) -> Option<(VertexSet, VertexSet, VertexSet)> {
    let n = local.n();
    for h in p_components(local) {
        if h.len() < 4 || h.len() > q || h.len() == n {
            continue;
        }
        let (hg, hmap) = local.induced_unchecked(h.as_slice());
        let Ok(Some((h1, h2))) = separable_bipartition(&hg) else {
            continue;
        };
        let h1: VertexSet = h1.iter().map(|v| hmap[v]).collect();
        let h2: VertexSet = h2.iter().map(|v| hmap[v]).collect();
        let rest = local.vertices().difference(&h);
        let attached = rest.iter().all(|a| {
            h1.iter().all(|v| local.has_edge(a, v)) && h2.iter().all(|v| !local.has_edge(a, v))
        });
        if !attached {
            continue;
        }
        // the outside is a module, so one representative decides mixed P4s
        let a = rest.as_slice()[0];
        let mut with_a = h.as_slice().to_vec();
        with_a.push(a);
        if local.induced_unchecked(&with_a).0.p4_count() != hg.p4_count() {
            continue;
        }
        return Some((h, h1, h2));
    }
    None
}

fn small_tidy_leaf(g: &Graph) -> Option<LeafReason> {
    if g.n() != 5 {
        return None;
    }
    let p5 = named::path(5);
    if is_p5(g, &p5) {
        Some(LeafReason::P5)
    } else if is_p5(&g.complement(), &p5) {
        Some(LeafReason::P5Bar)
    } else if g.is_connected() && (0..5).all(|v| g.degree(v) == 2) {
        Some(LeafReason::C5)
    } else {
        None
    }
}

fn is_p5(g: &Graph, _p5: &Graph) -> bool {
    let mut degrees: Vec<usize> = (0..g.n()).map(|v| g.degree(v)).collect();
    degrees.sort_unstable();
    g.is_connected() && g.edge_count() == 4 && degrees == [1, 1, 2, 2, 2]
}
