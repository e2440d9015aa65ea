//! Membership tests for the restricted coloring families.
//!
//! Every predicate takes a concrete graph and a concrete coloring. The
//! families nest as proper ⊇ acyclic ⊇ star ⊇ nonrepetitive ⊇ harmonious;
//! clique colorings are a separate family that does not require properness.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Graph, VertexSet};

/// Largest graph on which the nonrepetitive check will enumerate paths.
pub const NONREPETITIVE_MAX_VERTICES: usize = 14;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ValidationError {
    #[error("coloring has {got} entries but the graph has {expected} vertices")]
    VertexCountMismatch { expected: usize, got: usize },
    #[error("harmonious colorings are only defined here for connected graphs")]
    Disconnected,
    #[error("graph has {n} vertices, which exceeds the path-enumeration budget of {limit}")]
    ExceedsBudget { n: usize, limit: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("color {color} of vertex {vertex} is outside the palette of size {palette}")]
pub struct ColoringError {
    pub vertex: usize,
    pub color: usize,
    pub palette: usize,
}

/// An assignment of a color in `0..palette` to every vertex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Coloring {
    colors: Vec<usize>,
    palette: usize,
}

impl Coloring {
    pub fn new(colors: Vec<usize>, palette: usize) -> Result<Self, ColoringError> {
        if let Some((vertex, &color)) = colors.iter().enumerate().find(|(_, &c)| c >= palette) {
            return Err(ColoringError { vertex, color, palette });
        }
        Ok(Coloring { colors, palette })
    }

    /// Palette is the smallest one that fits every color.
    pub fn from_colors(colors: Vec<usize>) -> Self {
        let palette = colors.iter().map(|&c| c + 1).max().unwrap_or(0);
        Coloring { colors, palette }
    }

    pub fn colors(&self) -> &[usize] {
        &self.colors
    }

    pub fn color(&self, v: usize) -> usize {
        self.colors[v]
    }

    pub fn palette(&self) -> usize {
        self.palette
    }

    pub fn len(&self) -> usize {
        self.colors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.colors.is_empty()
    }

    /// Number of distinct colors actually used.
    pub fn colors_used(&self) -> usize {
        let mut seen = vec![false; self.palette];
        self.colors.iter().filter(|&&c| !std::mem::replace(&mut seen[c], true)).count()
    }

    /// Nonempty color classes, ordered by color.
    pub fn classes(&self) -> Vec<VertexSet> {
        let mut classes = vec![Vec::new(); self.palette];
        for (v, &c) in self.colors.iter().enumerate() {
            classes[c].push(v);
        }
        classes.into_iter().filter(|c| !c.is_empty()).map(VertexSet::new).collect()
    }

    /// Relabels colors by first occurrence, so the palette is exactly the colors used.
    pub fn canonical(&self) -> Coloring {
        let mut relabel: HashMap<usize, usize> = HashMap::new();
        let colors = self
            .colors
            .iter()
            .map(|&c| {
                let next = relabel.len();
                *relabel.entry(c).or_insert(next)
            })
            .collect();
        Coloring {
            colors,
            palette: relabel.len(),
        }
    }
}

/// The coloring families; also the variant tag of a chromatic number.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ColoringFamily {
    Proper,
    Acyclic,
    Star,
    #[serde(alias = "thue")]
    Nonrepetitive,
    Harmonious,
    Clique,
}

impl ColoringFamily {
    /// The five restricted variants, in chain order followed by clique.
    pub const RESTRICTED: [ColoringFamily; 5] = [
        ColoringFamily::Acyclic,
        ColoringFamily::Star,
        ColoringFamily::Nonrepetitive,
        ColoringFamily::Harmonious,
        ColoringFamily::Clique,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ColoringFamily::Proper => "proper",
            ColoringFamily::Acyclic => "acyclic",
            ColoringFamily::Star => "star",
            ColoringFamily::Nonrepetitive => "nonrepetitive",
            ColoringFamily::Harmonious => "harmonious",
            ColoringFamily::Clique => "clique",
        }
    }

    /// Whether membership requires a proper coloring.
    pub fn requires_proper(self) -> bool {
        self != ColoringFamily::Clique
    }

    /// Whether membership is inherited by induced subgraphs.
    pub fn is_hereditary(self) -> bool {
        self != ColoringFamily::Clique
    }
}

impl fmt::Display for ColoringFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ColoringFamily {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "proper" => Ok(ColoringFamily::Proper),
            "acyclic" => Ok(ColoringFamily::Acyclic),
            "star" => Ok(ColoringFamily::Star),
            "thue" | "nonrepetitive" => Ok(ColoringFamily::Nonrepetitive),
            "harmonious" => Ok(ColoringFamily::Harmonious),
            "clique" => Ok(ColoringFamily::Clique),
            other => Err(format!("unknown coloring variant `{other}`")),
        }
    }
}

fn check_len(g: &Graph, c: &Coloring) -> Result<(), ValidationError> {
    if c.len() != g.n() {
        return Err(ValidationError::VertexCountMismatch {
            expected: g.n(),
            got: c.len(),
        });
    }
    Ok(())
}

/// Membership of `c` in `family` on `g`.
pub fn check(family: ColoringFamily, g: &Graph, c: &Coloring) -> Result<bool, ValidationError> {
    match family {
        ColoringFamily::Proper => is_proper(g, c),
        ColoringFamily::Acyclic => is_acyclic_coloring(g, c),
        ColoringFamily::Star => is_star_coloring(g, c),
        ColoringFamily::Nonrepetitive => is_nonrepetitive(g, c),
        ColoringFamily::Harmonious => is_harmonious(g, c),
        ColoringFamily::Clique => is_clique_coloring(g, c),
    }
}

pub fn is_proper(g: &Graph, c: &Coloring) -> Result<bool, ValidationError> {
    check_len(g, c)?;
    Ok(g.edges().all(|(u, v)| c.color(u) != c.color(v)))
}

/// Edges of `g` grouped by the unordered pair of colors at their ends.
fn edges_by_color_pair(g: &Graph, c: &Coloring) -> HashMap<(usize, usize), Vec<(usize, usize)>> {
    let mut groups: HashMap<(usize, usize), Vec<(usize, usize)>> = HashMap::new();
    for (u, v) in g.edges() {
        let (a, b) = (c.color(u), c.color(v));
        groups.entry((a.min(b), a.max(b))).or_default().push((u, v));
    }
    groups
}

struct UnionFind {
    parent: HashMap<usize, usize>,
}

impl UnionFind {
    fn new() -> Self {
        UnionFind { parent: HashMap::new() }
    }

    fn find(&mut self, v: usize) -> usize {
        let p = *self.parent.entry(v).or_insert(v);
        if p == v {
            return v;
        }
        let root = self.find(p);
        self.parent.insert(v, root);
        root
    }

    /// Returns false if `u` and `v` were already connected.
    fn union(&mut self, u: usize, v: usize) -> bool {
        let (ru, rv) = (self.find(u), self.find(v));
        if ru == rv {
            return false;
        }
        self.parent.insert(ru, rv);
        true
    }
}

fn pair_is_forest(edges: &[(usize, usize)]) -> bool {
    let mut uf = UnionFind::new();
    edges.iter().all(|&(u, v)| uf.union(u, v))
}

/// A forest where each component has at most one vertex of degree > 1.
fn pair_is_star_forest(edges: &[(usize, usize)]) -> bool {
    if !pair_is_forest(edges) {
        return false;
    }
    let mut degree: HashMap<usize, usize> = HashMap::new();
    for &(u, v) in edges {
        *degree.entry(u).or_default() += 1;
        *degree.entry(v).or_default() += 1;
    }
    // a tree is a star iff every edge has a leaf end
    edges.iter().all(|&(u, v)| degree[&u] < 2 || degree[&v] < 2)
}

pub fn is_acyclic_coloring(g: &Graph, c: &Coloring) -> Result<bool, ValidationError> {
    if !is_proper(g, c)? {
        return Ok(false);
    }
    Ok(edges_by_color_pair(g, c).values().all(|edges| pair_is_forest(edges)))
}

pub fn is_star_coloring(g: &Graph, c: &Coloring) -> Result<bool, ValidationError> {
    if !is_proper(g, c)? {
        return Ok(false);
    }
    Ok(edges_by_color_pair(g, c).values().all(|edges| pair_is_star_forest(edges)))
}

/// No simple path `v1 … v2p` whose first half repeats the colors of its second half.
pub fn is_nonrepetitive(g: &Graph, c: &Coloring) -> Result<bool, ValidationError> {
    is_nonrepetitive_with_limit(g, c, NONREPETITIVE_MAX_VERTICES)
}

pub fn is_nonrepetitive_with_limit(g: &Graph, c: &Coloring, limit: usize) -> Result<bool, ValidationError> {
    check_len(g, c)?;
    if g.n() > limit.min(64) {
        return Err(ValidationError::ExceedsBudget {
            n: g.n(),
            limit: limit.min(64),
        });
    }
    if !is_proper(g, c)? {
        return Ok(false);
    }
    Ok(find_square_path(g, c).is_none())
}

/// A simple path whose color sequence has the form `xx`, if one exists.
pub fn find_square_path(g: &Graph, c: &Coloring) -> Option<Vec<usize>> {
    let n = g.n();
    let adj: Vec<Vec<usize>> = (0..n).map(|v| g.neighbors(v).collect()).collect();
    let half = n / 2;
    if half == 0 {
        return None;
    }
    // bit p set <=> the prefix is still consistent with period p
    let all_shifts: u64 = ((1u64 << half) - 1) << 1;
    let mut on_path = vec![false; n];
    for start in 0..n {
        let mut path = vec![start];
        on_path[start] = true;
        let found = extend_square(&adj, c.colors(), &mut path, &mut on_path, all_shifts);
        on_path[start] = false;
        if found {
            return Some(path);
        }
    }
    None
}

fn extend_square(adj: &[Vec<usize>], colors: &[usize], path: &mut Vec<usize>, on_path: &mut [bool], alive: u64) -> bool {
    let len = path.len();
    let last = path[len - 1];
    for &v in &adj[last] {
        if on_path[v] {
            continue;
        }
        let cv = colors[v];
        let mut next = alive;
        let mut bits = alive;
        while bits != 0 {
            let p = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            if len >= p && colors[path[len - p]] != cv {
                next &= !(1u64 << p);
            }
        }
        if next == 0 {
            continue;
        }
        path.push(v);
        let new_len = len + 1;
        if new_len.is_multiple_of(2) && next & (1u64 << (new_len / 2)) != 0 {
            return true;
        }
        on_path[v] = true;
        if extend_square(adj, colors, path, on_path, next) {
            return true;
        }
        on_path[v] = false;
        path.pop();
    }
    false
}

/// Proper, and each pair of color classes spans at most one edge.
///
/// That pair condition already rules out every square path: on a path
/// `v1 … v2p` with `p >= 2` repeating its colors, the distinct edges
/// `v1v2` and `v(p+1)v(p+2)` join the same two classes. So no path
/// enumeration is needed here.
pub fn is_harmonious(g: &Graph, c: &Coloring) -> Result<bool, ValidationError> {
    check_len(g, c)?;
    if !g.is_connected() {
        return Err(ValidationError::Disconnected);
    }
    if !is_proper(g, c)? {
        return Ok(false);
    }
    Ok(edges_by_color_pair(g, c).values().all(|edges| edges.len() <= 1))
}

/// Every maximal clique with at least two vertices sees two colors.
pub fn is_clique_coloring(g: &Graph, c: &Coloring) -> Result<bool, ValidationError> {
    check_len(g, c)?;
    Ok(clique_coloring_holds(&g.maximal_cliques(), c))
}

/// Clique-coloring test against a precomputed list of maximal cliques.
pub fn clique_coloring_holds(cliques: &[VertexSet], c: &Coloring) -> bool {
    cliques.iter().filter(|q| q.len() >= 2).all(|q| {
        let first = c.color(q.as_slice()[0]);
        q.iter().any(|v| c.color(v) != first)
    })
}
