//! P4-connectivity and separable p-components.

use crate::graph::{Graph, VertexSet};

use super::modules::characteristic_graph;
use super::DecompositionError;

/// The maximal p-connected vertex sets. Two vertices share a part when a
/// chain of induced P4s, consecutive ones overlapping, links them; vertices
/// on no P4 come back as singletons. Sorted by least vertex.
pub fn p_components(g: &Graph) -> Vec<VertexSet> {
    let n = g.n();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], v: usize) -> usize {
        let mut r = v;
        while parent[r] != r {
            r = parent[r];
        }
        let mut x = v;
        while parent[x] != r {
            let next = parent[x];
            parent[x] = r;
            x = next;
        }
        r
    }
    for p in g.enumerate_p4s() {
        for w in &p[1..] {
            let (a, b) = (find(&mut parent, p[0]), find(&mut parent, *w));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let mut parts: Vec<Vec<usize>> = Vec::new();
    let mut index_of_root = vec![usize::MAX; n];
    for v in 0..n {
        let r = find(&mut parent, v);
        if index_of_root[r] == usize::MAX {
            index_of_root[r] = parts.len();
            parts.push(Vec::new());
        }
        parts[index_of_root[r]].push(v);
    }
    parts.into_iter().map(VertexSet::new).collect()
}

/// Every bipartition of the vertex set is crossed by an induced P4.
/// Graphs on at most one vertex have no bipartition and count as p-connected.
pub fn is_p_connected(g: &Graph) -> bool {
    g.n() <= 1 || p_components(g).len() == 1
}

/// The `(H1, H2)` split of a separable p-connected graph: `H1` collects the
/// homogeneous sets that shrink onto the clique side of the characteristic
/// graph, `H2` the ones on the stable side. `None` when that graph is not split.
pub fn separable_bipartition(h: &Graph) -> Result<Option<(VertexSet, VertexSet)>, DecompositionError> {
    if h.n() < 4 || !is_p_connected(h) {
        return Err(DecompositionError::NotPConnected);
    }
    let ch = characteristic_graph(h);
    let q = &ch.graph;
    // In a split graph every P4 has its midpoints on the clique side and its
    // ends on the stable side, and each vertex of a p-connected quotient lies
    // on some P4, so the roles below fix the partition.
    let m = q.n();
    let mut role: Vec<Option<bool>> = vec![None; m];
    let mut assign = |v: usize, mid: bool| -> bool {
        match role[v] {
            Some(r) => r == mid,
            None => {
                role[v] = Some(mid);
                true
            }
        }
    };
    for [w, x, y, z] in q.enumerate_p4s() {
        if !(assign(w, false) && assign(z, false) && assign(x, true) && assign(y, true)) {
            return Ok(None);
        }
    }
    let clique_side: Vec<usize> = (0..m).filter(|&v| role[v] == Some(true)).collect();
    let stable_side: Vec<usize> = (0..m).filter(|&v| role[v] != Some(true)).collect();
    if role.iter().any(Option::is_none)
        || !q.is_clique(&VertexSet::new(clique_side.clone()))
        || !q.is_stable(&VertexSet::new(stable_side.clone()))
    {
        return Ok(None);
    }
    let h1: VertexSet = clique_side.iter().flat_map(|&b| ch.blocks[b].iter()).collect();
    let h2: VertexSet = stable_side.iter().flat_map(|&b| ch.blocks[b].iter()).collect();
    debug_assert!(crossing_p4s_respect(h, &h1));
    Ok(Some((h1, h2)))
}

/// Every P4 with vertices on both sides has its midpoints in `h1` and its ends outside.
pub fn crossing_p4s_respect(h: &Graph, h1: &VertexSet) -> bool {
    h.enumerate_p4s().into_iter().all(|[w, x, y, z]| {
        let inside = [w, x, y, z].iter().filter(|v| h1.contains(**v)).count();
        inside == 0 || inside == 4 || (h1.contains(x) && h1.contains(y) && !h1.contains(w) && !h1.contains(z))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::named::*;

    fn set(v: &[usize]) -> VertexSet {
        VertexSet::new(v.to_vec())
    }

    #[test]
    fn p_connectivity_examples() {
        assert!(is_p_connected(&path(4)));
        assert!(is_p_connected(&cycle(5)));
        assert!(!is_p_connected(&cycle(4)));
        assert!(!is_p_connected(&complete(3)));
        assert_eq!(p_components(&Graph::disjoint_union(&path(4), &complete(1))), vec![set(&[0, 1, 2, 3]), set(&[4])]);
    }

    #[test]
    fn separable_examples() {
        assert_eq!(separable_bipartition(&path(4)).unwrap(), Some((set(&[1, 2]), set(&[0, 3]))));
        assert_eq!(separable_bipartition(&cycle(5)).unwrap(), None);
        assert_eq!(separable_bipartition(&path(5)).unwrap(), None);
        assert_eq!(separable_bipartition(&cycle(4)), Err(DecompositionError::NotPConnected));
    }
}
