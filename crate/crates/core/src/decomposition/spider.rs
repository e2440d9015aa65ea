//! Spiders and quasi-spiders.
//!
//! A spider has a vertex partition `(R, C, S)` with `C = {c1..ck}` a clique,
//! `S = {s1..sk}` a stable set, `k >= 2`, every head vertex in `R` complete to
//! `C` and anticomplete to `S`. In a thin spider `si ~ cj` iff `i = j`, in a
//! thick one iff `i != j`. A quasi-spider substitutes a `K2` or a `K2bar`
//! for one vertex of `C ∪ S`.

use serde::{Deserialize, Serialize};

use crate::graph::{Graph, VertexSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Thickness {
    Thin,
    Thick,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    InC,
    InS,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PairKind {
    #[serde(rename = "K2")]
    K2,
    #[serde(rename = "K2bar")]
    K2Bar,
}

/// The substituted vertex of a quasi-spider. `pair.0` occupies a matched
/// slot of its side; `pair.1` is its twin, stored as the extra last entry.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Replacement {
    pub side: Side,
    pub kind: PairKind,
    pub pair: (usize, usize),
}

/// `clique[i]` and `stable[i]` are matched for `i < k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpiderPartition {
    pub head: VertexSet,
    pub clique: Vec<usize>,
    pub stable: Vec<usize>,
    pub thickness: Thickness,
    pub replaced: Option<Replacement>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Role {
    Head,
    Clique(usize),
    Stable(usize),
}

impl SpiderPartition {
    /// `min(|C|, |S|)`.
    pub fn k(&self) -> usize {
        self.clique.len().min(self.stable.len())
    }

    pub fn is_quasi(&self) -> bool {
        self.replaced.is_some()
    }

    pub fn vertex_count(&self) -> usize {
        self.head.len() + self.clique.len() + self.stable.len()
    }

    pub fn vertices(&self) -> VertexSet {
        self.head
            .iter()
            .chain(self.clique.iter().copied())
            .chain(self.stable.iter().copied())
            .collect()
    }

    pub(crate) fn role(&self, v: usize) -> Option<Role> {
        if self.head.contains(v) {
            return Some(Role::Head);
        }
        let slot = |side: &[usize]| {
            let i = side.iter().position(|&x| x == v)?;
            if i < self.k() {
                return Some(i);
            }
            // the extra entry shares its twin's slot
            let twin = self.replaced?.pair.0;
            side.iter().position(|&x| x == twin)
        };
        if let Some(i) = slot(&self.clique) {
            return Some(Role::Clique(i));
        }
        slot(&self.stable).map(Role::Stable)
    }

    fn is_pair(&self, u: usize, v: usize) -> bool {
        self.replaced
            .is_some_and(|r| (r.pair == (u, v)) || (r.pair == (v, u)))
    }

    /// Adjacency forced by the partition; `None` for two head vertices.
    pub fn forced_adjacency(&self, u: usize, v: usize) -> Option<bool> {
        let (ru, rv) = (self.role(u)?, self.role(v)?);
        let pair_kind = self.is_pair(u, v).then(|| self.replaced.expect("pair").kind);
        Some(match (ru, rv) {
            (Role::Head, Role::Head) => return None,
            (Role::Head, Role::Clique(_)) | (Role::Clique(_), Role::Head) => true,
            (Role::Head, Role::Stable(_)) | (Role::Stable(_), Role::Head) => false,
            (Role::Clique(_), Role::Clique(_)) => pair_kind != Some(PairKind::K2Bar),
            (Role::Stable(_), Role::Stable(_)) => pair_kind == Some(PairKind::K2),
            (Role::Clique(i), Role::Stable(j)) | (Role::Stable(j), Role::Clique(i)) => match self.thickness {
                Thickness::Thin => i == j,
                Thickness::Thick => i != j,
            },
        })
    }

    /// Checks the partition against the induced subgraph of `g` on its vertices.
    pub fn check(&self, g: &Graph) -> Result<(), String> {
        let k = self.k();
        if k < 2 {
            return Err(format!("k = {k} < 2"));
        }
        let (c, s) = (self.clique.len(), self.stable.len());
        match self.replaced {
            None if c != s => return Err(format!("|C| = {c} differs from |S| = {s}")),
            Some(r) => {
                let big = match r.side {
                    Side::InC => (&self.clique, c, s),
                    Side::InS => (&self.stable, s, c),
                };
                if big.1 != big.2 + 1 {
                    return Err("replaced side must have exactly one extra vertex".into());
                }
                if big.0.last() != Some(&r.pair.1) || !big.0[..k].contains(&r.pair.0) {
                    return Err("replaced pair is not laid out as (slot, extra)".into());
                }
                if g.has_edge(r.pair.0, r.pair.1) != (r.kind == PairKind::K2) {
                    return Err("pair kind does not match the graph".into());
                }
            }
            _ => {}
        }
        let all = self.vertices();
        if all.len() != self.vertex_count() {
            return Err("parts overlap".into());
        }
        let vs = all.as_slice();
        for (i, &u) in vs.iter().enumerate() {
            for &v in &vs[i + 1..] {
                if let Some(want) = self.forced_adjacency(u, v) {
                    if g.has_edge(u, v) != want {
                        return Err(format!("adjacency of {u} and {v} contradicts the partition"));
                    }
                }
            }
        }
        Ok(())
    }

    /// Maps every vertex through `map` (local index to parent index).
    pub fn relabel(&self, map: &[usize]) -> SpiderPartition {
        SpiderPartition {
            head: self.head.iter().map(|v| map[v]).collect(),
            clique: self.clique.iter().map(|&v| map[v]).collect(),
            stable: self.stable.iter().map(|&v| map[v]).collect(),
            thickness: self.thickness,
            replaced: self.replaced.map(|r| Replacement {
                pair: (map[r.pair.0], map[r.pair.1]),
                ..r
            }),
        }
    }
}

/// Thin spider by its pendant vertices: in a thin spider exactly the
/// vertices of `S` have degree one.
fn thin_spider(g: &Graph) -> Option<SpiderPartition> {
    let n = g.n();
    let mut pendants: Vec<(usize, usize)> = (0..n)
        .filter(|&v| g.degree(v) == 1)
        .map(|s| (g.neighbors(s).next().expect("degree one"), s))
        .collect();
    if pendants.len() < 2 {
        return None;
    }
    pendants.sort_unstable();
    if pendants.windows(2).any(|w| w[0].0 == w[1].0) {
        return None;
    }
    let clique: Vec<usize> = pendants.iter().map(|p| p.0).collect();
    let stable: Vec<usize> = pendants.iter().map(|p| p.1).collect();
    let head: VertexSet = (0..n).filter(|v| !clique.contains(v) && !stable.contains(v)).collect();
    let part = SpiderPartition {
        head,
        clique,
        stable,
        thickness: Thickness::Thin,
        replaced: None,
    };
    part.check(g).ok().map(|_| part)
}

/// A spider partition of `g`, preferring the thin reading when `k = 2`
/// (the thin and thick spiders coincide there up to relabeling).
pub fn recognize_spider(g: &Graph) -> Option<SpiderPartition> {
    if g.n() < 4 {
        return None;
    }
    if let Some(p) = thin_spider(g) {
        return Some(p);
    }
    // the complement of a thick spider (R, C, S) is a thin spider (R, S, C)
    let co = thin_spider(&g.complement())?;
    let part = SpiderPartition {
        head: co.head,
        clique: co.stable,
        stable: co.clique,
        thickness: Thickness::Thick,
        replaced: None,
    };
    debug_assert!(part.check(g).is_ok());
    Some(part)
}

/// A spider or quasi-spider partition of `g`.
pub fn recognize_quasi_spider(g: &Graph) -> Option<SpiderPartition> {
    if let Some(p) = recognize_spider(g) {
        return Some(p);
    }
    let n = g.n();
    if n < 5 {
        return None;
    }
    for u in 0..n {
        for v in u + 1..n {
            if !are_twins(g, u, v) {
                continue;
            }
            let rest: Vec<usize> = (0..n).filter(|&w| w != v).collect();
            let (sub, map) = g.induced_unchecked(&rest);
            let Some(base) = recognize_spider(&sub) else { continue };
            let mut part = base.relabel(&map);
            let side = if part.clique.contains(&u) {
                part.clique.push(v);
                Side::InC
            } else if part.stable.contains(&u) {
                part.stable.push(v);
                Side::InS
            } else {
                continue;
            };
            part.replaced = Some(Replacement {
                side,
                kind: if g.has_edge(u, v) { PairKind::K2 } else { PairKind::K2Bar },
                pair: (u, v),
            });
            if part.check(g).is_ok() {
                return Some(part);
            }
        }
    }
    None
}

/// `u` and `v` see the same vertices apart from each other.
pub fn are_twins(g: &Graph, u: usize, v: usize) -> bool {
    let mut nu = g.neighbor_bits(u).clone();
    let mut nv = g.neighbor_bits(v).clone();
    nu.set(v, false);
    nv.set(u, false);
    nu == nv
}

/// Builds the graph of a spider partition over vertices `0..n`, with the
/// head's internal edges supplied separately.
pub fn spider_graph(part: &SpiderPartition, head_edges: &[(usize, usize)]) -> Graph {
    let n = part.vertex_count();
    let mut g = Graph::from_edges(n, head_edges.iter().copied()).expect("head edges in range");
    let vs = part.vertices();
    let vs = vs.as_slice();
    for (i, &u) in vs.iter().enumerate() {
        for &v in &vs[i + 1..] {
            if part.forced_adjacency(u, v) == Some(true) {
                g.add_edge(u, v).expect("distinct vertices");
            }
        }
    }
    g
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::graph::named::*;

    /// thin spider k=2 with a single head vertex r=4
    fn thin_k2_with_head() -> Graph {
        // c0=0, c1=1, s0=2, s1=3, r=4
        Graph::from_edges(5, [(0, 1), (0, 2), (1, 3), (4, 0), (4, 1)]).unwrap()
    }

    /// thick spider k=3 without head: c = 0,1,2; s = 3,4,5
    pub(crate) fn thick_k3() -> Graph {
        let mut g = complete(3);
        g = Graph::disjoint_union(&g, &empty(3));
        for i in 0..3 {
            for j in 0..3 {
                if i != j {
                    g.add_edge(i, 3 + j).unwrap();
                }
            }
        }
        g
    }

    #[test]
    fn thin_spider_found() {
        let p = recognize_spider(&thin_k2_with_head()).unwrap();
        assert_eq!(p.thickness, Thickness::Thin);
        assert_eq!(p.head, VertexSet::singleton(4));
        assert_eq!(p.clique, vec![0, 1]);
        assert_eq!(p.stable, vec![2, 3]);
    }

    #[test]
    fn thick_spider_found() {
        let g = thick_k3();
        let p = recognize_spider(&g).unwrap();
        assert_eq!(p.thickness, Thickness::Thick);
        assert!(p.head.is_empty());
        assert_eq!(p.k(), 3);
        p.check(&g).unwrap();
    }

    #[test]
    fn c5_and_cographs_are_not_spiders() {
        assert!(recognize_spider(&cycle(5)).is_none());
        assert!(recognize_quasi_spider(&cycle(5)).is_none());
        assert!(recognize_quasi_spider(&cycle(4)).is_none());
    }

    #[test]
    fn p4_is_a_thin_spider() {
        let p = recognize_spider(&path(4)).unwrap();
        assert_eq!(p.thickness, Thickness::Thin);
        assert_eq!((p.clique.clone(), p.stable.clone()), (vec![1, 2], vec![0, 3]));
    }

    #[test]
    fn quasi_spider_with_k2_in_c() {
        // P4 0-1-2-3 with vertex 1 doubled into a K2 {1, 4}
        let g = Graph::from_edges(5, [(0, 1), (1, 2), (2, 3), (0, 4), (4, 2), (1, 4)]).unwrap();
        assert!(recognize_spider(&g).is_none());
        let p = recognize_quasi_spider(&g).unwrap();
        let r = p.replaced.unwrap();
        assert_eq!((r.side, r.kind), (Side::InC, PairKind::K2));
        p.check(&g).unwrap();
    }

    #[test]
    fn quasi_spider_with_k2bar_in_s() {
        // P4 0-1-2-3 with pendant 0 doubled into a K2bar {0, 4}
        let g = Graph::from_edges(5, [(0, 1), (1, 2), (2, 3), (4, 1)]).unwrap();
        let p = recognize_quasi_spider(&g).unwrap();
        let r = p.replaced.unwrap();
        assert_eq!((r.side, r.kind), (Side::InS, PairKind::K2Bar));
        assert_eq!(p.k(), 2);
    }

    #[test]
    fn spider_graph_round_trip() {
        let g = thick_k3();
        let p = recognize_spider(&g).unwrap();
        assert_eq!(spider_graph(&p, &[]), g);
    }
}
