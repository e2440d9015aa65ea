//! Class membership: (q,q-4)-graphs, the q-value, and P4-tidiness.

use serde::{Deserialize, Serialize};

use crate::graph::Graph;

use super::tree::{build_tree, Mode};
use super::DecompositionError;

/// Graphs up to this size are tested against the subset definition directly.
pub const EXHAUSTIVE_Q_MAX_VERTICES: usize = 20;

/// Below this size `compute_q` uses the subset definition at every step.
const SMALL_SCAN_VERTICES: usize = 7;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct QValue {
    pub q: usize,
}

/// `f[m]` = most induced P4s on any set of at most `m` vertices, `m = 0..=q`.
/// Runs a subset-sum transform over all `2^n` vertex sets.
pub(crate) fn exhaustive_profile(g: &Graph, q: usize) -> Vec<usize> {
    let n = g.n();
    assert!(n <= EXHAUSTIVE_Q_MAX_VERTICES, "profile of {n} vertices");
    let mut count = vec![0u32; 1 << n];
    for p in g.enumerate_p4s() {
        count[p.iter().fold(0usize, |m, &v| m | 1 << v)] += 1;
    }
    for bit in 0..n {
        for mask in 0..1usize << n {
            if mask & 1 << bit != 0 {
                count[mask] += count[mask ^ 1 << bit];
            }
        }
    }
    let mut f = vec![0usize; q + 1];
    for (mask, &c) in count.iter().enumerate() {
        let size = mask.count_ones() as usize;
        if size <= q {
            f[size] = f[size].max(c as usize);
        }
    }
    for m in 1..=q {
        f[m] = f[m].max(f[m - 1]);
    }
    f
}

/// Profile of two vertex-disjoint parts that share no induced P4.
pub(crate) fn max_plus(a: &[usize], b: &[usize], q: usize) -> Vec<usize> {
    let mut out = vec![0usize; q + 1];
    for (i, &x) in a.iter().enumerate().take(q + 1) {
        for (j, &y) in b.iter().enumerate().take(q + 1 - i) {
            let slot = &mut out[i + j];
            *slot = (*slot).max(x + y);
        }
    }
    out
}

/// Profile of the legs of a spider with `k` legs: its P4s are exactly the
/// pairs of legs.
pub(crate) fn spider_body_profile(k: usize, q: usize, enabled: bool) -> Vec<usize> {
    if !enabled {
        return Vec::new();
    }
    (0..=q)
        .map(|m| {
            let legs = (m / 2).min(k);
            legs * legs.saturating_sub(1) / 2
        })
        .collect()
}

/// No set of at most `q` vertices induces more than `q - 4` P4s.
///
/// Decided by the decomposition; falls back to the subset definition when a
/// small component is too large to profile.
pub fn is_qq4(g: &Graph, q: usize) -> bool {
    if q < 4 {
        return false;
    }
    match build_tree(g, Mode::Qq4 { q }) {
        Ok(_) => true,
        Err(DecompositionError::Rejected(_)) => false,
        Err(_) => is_qq4_exhaustive(g, q),
    }
}

/// The subset definition, checked over every set of `min(q, n)` vertices.
pub fn is_qq4_exhaustive(g: &Graph, q: usize) -> bool {
    if q < 4 {
        return false;
    }
    let n = g.n();
    let m = q.min(n);
    if n <= EXHAUSTIVE_Q_MAX_VERTICES {
        return exhaustive_profile(g, m)[m] + 4 <= q;
    }
    let p4s: Vec<u128> = g
        .enumerate_p4s()
        .into_iter()
        .map(|p| p.iter().fold(0u128, |acc, &v| acc | 1 << v))
        .collect();
    assert!(n <= 128, "subset check on {n} vertices");
    let mut chosen = Vec::with_capacity(m);
    fn rec(start: usize, n: usize, m: usize, chosen: &mut Vec<usize>, p4s: &[u128], limit: usize) -> bool {
        if chosen.len() == m {
            let mask = chosen.iter().fold(0u128, |acc, &v| acc | 1 << v);
            return p4s.iter().filter(|&&p| p & mask == p).count() <= limit;
        }
        for v in start..=n - (m - chosen.len()) {
            chosen.push(v);
            let ok = rec(v + 1, n, m, chosen, p4s, limit);
            chosen.pop();
            if !ok {
                return false;
            }
        }
        true
    }
    rec(0, n, m, &mut chosen, &p4s, q - 4)
}

/// The least `q >= 4` with `g` a (q,q-4)-graph.
pub fn compute_q(g: &Graph) -> QValue {
    let n = g.n();
    let upper = n.max(g.p4_count() + 4);
    for q in 4..upper {
        let member = if n <= SMALL_SCAN_VERTICES {
            is_qq4_exhaustive(g, q)
        } else {
            is_qq4(g, q)
        };
        if member {
            return QValue { q };
        }
    }
    QValue { q: upper }
}

/// For every induced P4, at most one further vertex creates a second P4
/// together with it.
pub fn is_p4_tidy(g: &Graph) -> bool {
    let n = g.n();
    g.enumerate_p4s().into_iter().all(|p| {
        let mut partners = 0;
        for z in 0..n {
            if p.contains(&z) {
                continue;
            }
            let creates = (0..4).any(|skip| {
                let mut quad = [z; 4];
                let mut i = 1;
                for (j, &v) in p.iter().enumerate() {
                    if j != skip {
                        quad[i] = v;
                        i += 1;
                    }
                }
                g.induces_p4(quad)
            });
            if creates {
                partners += 1;
                if partners > 1 {
                    return false;
                }
            }
        }
        true
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::named::*;

    #[test]
    fn q_values() {
        assert_eq!(compute_q(&complete_bipartite(3, 2)).q, 4);
        assert_eq!(compute_q(&path(4)).q, 5);
        assert_eq!(compute_q(&Graph::new(0)).q, 4);
    }

    #[test]
    fn p4_in_qq4_4_is_rejected() {
        assert!(!is_qq4(&path(4), 4));
        assert!(!is_qq4_exhaustive(&path(4), 4));
        assert!(is_qq4(&path(4), 5));
    }

    #[test]
    fn profile_of_p5() {
        // P5 has 2 P4s: 0123 and 1234
        assert_eq!(exhaustive_profile(&path(5), 6), vec![0, 0, 0, 0, 1, 2, 2]);
    }

    #[test]
    fn tidy_examples() {
        assert!(is_p4_tidy(&cycle(5)));
        assert!(is_p4_tidy(&path(5)));
        assert!(is_p4_tidy(&complete(4)));
        assert!(!is_p4_tidy(&path(6)));
    }

    #[test]
    fn max_plus_is_capped() {
        assert_eq!(max_plus(&[0, 0, 1], &[0, 0, 1], 2), vec![0, 0, 1]);
        assert_eq!(max_plus(&[0, 1, 2], &[0, 1, 1], 3), vec![0, 1, 2, 3]);
    }
}
