//! Exhaustive ground truth: exact chromatic numbers by set-partition search,
//! all colorings of a small graph in a family, a class-member generator and
//! graph enumeration up to isomorphism.

mod enumerate;
mod generate;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::engine::{ChromaticResult, TraceEntry};
use crate::graph::{Graph, VertexSet};
use crate::validators::{find_square_path, Coloring, ColoringFamily};

pub use enumerate::{canonical_form, graphs_up_to_iso};
pub use generate::{generate, GenClass, GeneratorSpec, OpWeights};

/// Default vertex limit for the nonrepetitive and harmonious searches.
pub const DEFAULT_SLOW_MAX_VERTICES: usize = 12;
/// Default vertex limit for every other family.
pub const DEFAULT_MAX_VERTICES: usize = 14;
/// Default cap on search nodes visited by one call.
pub const DEFAULT_MAX_STEPS: u64 = 2_000_000_000;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleBudget {
    /// Overrides the per-family vertex limit.
    pub max_vertices: Option<usize>,
    pub max_steps: Option<u64>,
}

impl OracleBudget {
    pub fn vertices(limit: usize) -> Self {
        OracleBudget {
            max_vertices: Some(limit),
            max_steps: None,
        }
    }

    pub fn vertex_limit(&self, family: ColoringFamily) -> usize {
        self.max_vertices.unwrap_or(match family {
            ColoringFamily::Nonrepetitive | ColoringFamily::Harmonious => DEFAULT_SLOW_MAX_VERTICES,
            _ => DEFAULT_MAX_VERTICES,
        })
    }

    pub fn step_limit(&self) -> u64 {
        self.max_steps.unwrap_or(DEFAULT_MAX_STEPS)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("{n} vertices exceed the oracle budget of {limit}")]
    ExceedsBudget { n: usize, limit: usize },
    #[error("search gave up after {limit} steps")]
    StepBudget { limit: u64 },
    #[error("harmonious colorings are only defined here for connected graphs")]
    Disconnected,
}

const UNSET: usize = usize::MAX;

struct Search<'a> {
    g: &'a Graph,
    family: ColoringFamily,
    /// `order[i]` is the i-th vertex to be colored.
    order: Vec<usize>,
    colors: Vec<usize>,
    /// Harmonious only: edges currently spanning each color pair.
    pair_edges: Vec<Vec<u8>>,
    /// Clique only: maximal cliques (size >= 2) completed at each position.
    cliques_at: Vec<Vec<VertexSet>>,
    rainbow: Option<FixedBitSet>,
    steps: u64,
    step_limit: u64,
}

impl<'a> Search<'a> {
    fn new(g: &'a Graph, family: ColoringFamily, order: Vec<usize>, budget: &OracleBudget) -> Self {
        let n = g.n();
        let mut pos = vec![0; n];
        for (i, &v) in order.iter().enumerate() {
            pos[v] = i;
        }
        let mut cliques_at = vec![Vec::new(); n];
        if family == ColoringFamily::Clique {
            for q in g.maximal_cliques().into_iter().filter(|q| q.len() >= 2) {
                let last = q.iter().map(|v| pos[v]).max().expect("nonempty");
                cliques_at[last].push(q);
            }
        }
        Search {
            g,
            family,
            order,
            colors: vec![UNSET; n],
            pair_edges: if family == ColoringFamily::Harmonious {
                vec![vec![0; n]; n]
            } else {
                Vec::new()
            },
            cliques_at,
            rainbow: None,
            steps: 0,
            step_limit: budget.step_limit(),
        }
    }

    /// Whether coloring the vertex at position `i` with `c` keeps the prefix valid.
    fn fits(&self, i: usize, c: usize) -> bool {
        let v = self.order[i];
        let g = self.g;
        if let Some(r) = &self.rainbow {
            if r.contains(v) && r.ones().any(|u| self.colors[u] == c) {
                return false;
            }
        }
        match self.family {
            ColoringFamily::Clique => {
                return self.cliques_at[i].iter().all(|q| {
                    q.iter().any(|u| {
                        let cu = if u == v { c } else { self.colors[u] };
                        cu != c
                    })
                });
            }
            _ => {
                if g.neighbors(v).any(|u| self.colors[u] == c) {
                    return false;
                }
            }
        }
        match self.family {
            ColoringFamily::Proper | ColoringFamily::Clique => true,
            ColoringFamily::Harmonious => {
                let mut seen = Vec::new();
                for u in g.neighbors(v) {
                    let d = self.colors[u];
                    if d == UNSET {
                        continue;
                    }
                    if self.pair_edges[c][d] > 0 || seen.contains(&d) {
                        return false;
                    }
                    seen.push(d);
                }
                true
            }
            ColoringFamily::Acyclic => self.bicolored_ok(v, c, false),
            ColoringFamily::Star | ColoringFamily::Nonrepetitive => self.bicolored_ok(v, c, true),
        }
    }

    /// The component of `v` in each two-colored subgraph through `v` stays a
    /// tree, and a star when `star` is set.
    fn bicolored_ok(&self, v: usize, c: usize, star: bool) -> bool {
        let g = self.g;
        let mut others: Vec<usize> = g
            .neighbors(v)
            .map(|u| self.colors[u])
            .filter(|&d| d != UNSET)
            .collect();
        others.sort_unstable();
        others.dedup();
        let color_of = |u: usize| if u == v { c } else { self.colors[u] };
        for d in others {
            let mut seen = vec![v];
            let mut stack = vec![v];
            let mut degree_sum = 0;
            let mut hubs = 0;
            while let Some(x) = stack.pop() {
                let mut deg = 0;
                for y in g.neighbors(x) {
                    let cy = color_of(y);
                    if cy != c && cy != d {
                        continue;
                    }
                    deg += 1;
                    if !seen.contains(&y) {
                        seen.push(y);
                        stack.push(y);
                    }
                }
                degree_sum += deg;
                if deg > 1 {
                    hubs += 1;
                }
            }
            if degree_sum / 2 != seen.len() - 1 || (star && hubs > 1) {
                return false;
            }
        }
        true
    }

    fn set(&mut self, i: usize, c: usize) {
        let v = self.order[i];
        self.colors[v] = c;
        if self.family == ColoringFamily::Harmonious {
            for u in self.g.neighbors(v) {
                let d = self.colors[u];
                if d != UNSET && u != v {
                    self.pair_edges[c][d] += 1;
                    self.pair_edges[d][c] += 1;
                }
            }
        }
    }

    fn unset(&mut self, i: usize) {
        let v = self.order[i];
        let c = self.colors[v];
        if self.family == ColoringFamily::Harmonious {
            for u in self.g.neighbors(v) {
                let d = self.colors[u];
                if d != UNSET && u != v {
                    self.pair_edges[c][d] -= 1;
                    self.pair_edges[d][c] -= 1;
                }
            }
        }
        self.colors[v] = UNSET;
    }

    fn complete_ok(&self) -> bool {
        match self.family {
            ColoringFamily::Nonrepetitive => {
                find_square_path(self.g, &Coloring::from_colors(self.colors.clone())).is_none()
            }
            _ => true,
        }
    }

    /// Restricted-growth search. With `blocks = Some(k)` only colorings with
    /// exactly `k` colors are visited. `visit` returns true to stop.
    fn run(
        &mut self,
        i: usize,
        used: usize,
        blocks: Option<usize>,
        visit: &mut dyn FnMut(&[usize]) -> bool,
    ) -> Result<bool, OracleError> {
        self.steps += 1;
        if self.steps > self.step_limit {
            return Err(OracleError::StepBudget { limit: self.step_limit });
        }
        let n = self.order.len();
        if i == n {
            if blocks.is_some_and(|k| used != k) || !self.complete_ok() {
                return Ok(false);
            }
            return Ok(visit(&self.colors));
        }
        let top = match blocks {
            Some(k) => {
                if n - i < k - used {
                    return Ok(false);
                }
                (used + 1).min(k)
            }
            None => used + 1,
        };
        for c in 0..top {
            if !self.fits(i, c) {
                continue;
            }
            self.set(i, c);
            let stop = self.run(i + 1, used.max(c + 1), blocks, visit)?;
            self.unset(i);
            if stop {
                return Ok(true);
            }
        }
        Ok(false)
    }
}

/// Next vertex: most neighbors already placed, ties to the smaller index.
fn search_order(g: &Graph) -> Vec<usize> {
    let n = g.n();
    let mut placed = vec![false; n];
    let mut weight = vec![0usize; n];
    let mut order = Vec::with_capacity(n);
    for _ in 0..n {
        let v = (0..n)
            .filter(|&v| !placed[v])
            .max_by_key(|&v| (weight[v], g.degree(v), std::cmp::Reverse(v)))
            .expect("a vertex is left");
        placed[v] = true;
        order.push(v);
        for u in g.neighbors(v) {
            weight[u] += 1;
        }
    }
    order
}

fn check_budget(g: &Graph, family: ColoringFamily, budget: &OracleBudget) -> Result<(), OracleError> {
    let limit = budget.vertex_limit(family);
    if g.n() > limit {
        return Err(OracleError::ExceedsBudget { n: g.n(), limit });
    }
    if family == ColoringFamily::Harmonious && !g.is_connected() {
        return Err(OracleError::Disconnected);
    }
    Ok(())
}

/// An optimal coloring of `g` in `family`, in canonical color order.
pub fn exact_coloring(g: &Graph, family: ColoringFamily, budget: &OracleBudget) -> Result<Coloring, OracleError> {
    check_budget(g, family, budget)?;
    let n = g.n();
    if n == 0 {
        return Ok(Coloring::from_colors(Vec::new()));
    }
    let lower = if family.requires_proper() {
        g.maximal_cliques().iter().map(VertexSet::len).max().unwrap_or(1)
    } else {
        1
    };
    let mut search = Search::new(g, family, search_order(g), budget);
    for k in lower..=n {
        let mut found = None;
        search.run(0, 0, Some(k), &mut |colors| {
            found = Some(colors.to_vec());
            true
        })?;
        if let Some(colors) = found {
            return Ok(Coloring::from_colors(colors).canonical());
        }
    }
    unreachable!("the rainbow coloring belongs to every family")
}

/// Exact chromatic number of `g` in `family` with an optimal witness.
pub fn exact_chromatic(g: &Graph, family: ColoringFamily, budget: &OracleBudget) -> Result<ChromaticResult, OracleError> {
    let witness = exact_coloring(g, family, budget)?;
    let value = witness.colors_used();
    Ok(ChromaticResult {
        variant: family,
        value,
        witness,
        trace: vec![TraceEntry {
            node: None,
            rule: "oracle".into(),
            value,
            note: None,
        }],
        separable_checks: Vec::new(),
    })
}

/// Every coloring of `h` in `family`, one per renaming class, listed in
/// restricted-growth order over the natural vertex order. With `rainbow`,
/// only colorings giving those vertices pairwise distinct colors.
pub fn family_colorings(
    h: &Graph,
    family: ColoringFamily,
    rainbow: Option<&VertexSet>,
    budget: &OracleBudget,
) -> Result<Vec<Coloring>, OracleError> {
    check_budget(h, family, budget)?;
    let mut search = Search::new(h, family, (0..h.n()).collect(), budget);
    search.rainbow = rainbow.map(|r| r.to_bits(h.n()));
    let mut out = Vec::new();
    search.run(0, 0, None, &mut |colors| {
        out.push(Coloring::from_colors(colors.to_vec()));
        false
    })?;
    Ok(out)
}
