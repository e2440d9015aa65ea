use std::collections::BTreeMap;

use crate::graph::Graph;

/// Largest order accepted by `canonical_form`.
const MAX_CANONICAL_VERTICES: usize = 11;

fn pair_index(i: usize, j: usize) -> usize {
    debug_assert!(i < j);
    j * (j - 1) / 2 + i
}

/// Smallest edge bitmask over all relabelings that list vertices by a
/// refined degree invariant. Equal exactly for isomorphic graphs.
pub fn canonical_form(g: &Graph) -> u64 {
    let n = g.n();
    assert!(n <= MAX_CANONICAL_VERTICES, "canonical form of {n} vertices");
    let invariant = |v: usize| {
        let mut around: Vec<usize> = g.neighbors(v).map(|u| g.degree(u)).collect();
        around.sort_unstable();
        (g.degree(v), around)
    };
    let mut verts: Vec<usize> = (0..n).collect();
    verts.sort_by_key(|&v| invariant(v));
    let mut cells: Vec<Vec<usize>> = Vec::new();
    for &v in &verts {
        match cells.last_mut() {
            Some(cell) if invariant(cell[0]) == invariant(v) => cell.push(v),
            _ => cells.push(vec![v]),
        }
    }
    let edges: Vec<(usize, usize)> = g.edges().collect();
    let mut best = u64::MAX;
    let mut label = vec![0usize; n];
    permute_cells(&mut cells, 0, &mut |cells| {
        for (i, v) in cells.iter().flatten().enumerate() {
            label[*v] = i;
        }
        let mask = edges.iter().fold(0u64, |m, &(u, v)| {
            let (a, b) = (label[u].min(label[v]), label[u].max(label[v]));
            m | 1 << pair_index(a, b)
        });
        best = best.min(mask);
    });
    best
}

/// Calls `f` on every arrangement obtained by permuting inside each cell.
fn permute_cells(cells: &mut [Vec<usize>], at: usize, f: &mut dyn FnMut(&[Vec<usize>])) {
    if at == cells.len() {
        f(cells);
        return;
    }
    heap_permutations(cells, at, cells[at].len(), f);
}

fn heap_permutations(cells: &mut [Vec<usize>], at: usize, k: usize, f: &mut dyn FnMut(&[Vec<usize>])) {
    if k <= 1 {
        permute_cells(cells, at + 1, f);
        return;
    }
    for i in 0..k {
        heap_permutations(cells, at, k - 1, f);
        let j = if k.is_multiple_of(2) { i } else { 0 };
        cells[at].swap(j, k - 1);
    }
}

/// One graph per isomorphism class on `n` vertices, grown vertex by vertex
/// and deduplicated by canonical form.
pub fn graphs_up_to_iso(n: usize) -> Vec<Graph> {
    let mut level: Vec<Graph> = vec![Graph::new(0)];
    for m in 1..=n {
        let mut next: BTreeMap<u64, Graph> = BTreeMap::new();
        for base in &level {
            for mask in 0u32..1 << (m - 1) {
                let mut g = Graph::new(m);
                for (u, v) in base.edges() {
                    g.add_edge(u, v).expect("in range");
                }
                for u in 0..m - 1 {
                    if mask >> u & 1 == 1 {
                        g.add_edge(u, m - 1).expect("in range");
                    }
                }
                next.entry(canonical_form(&g)).or_insert(g);
            }
        }
        level = next.into_values().collect();
    }
    level
}
