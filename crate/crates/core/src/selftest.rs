//! Engine against oracle on every small P4-tidy graph and on sampled class
//! members. Instances run in parallel; results keep instance order.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::decomposition::{is_p4_tidy, Mode};
use crate::engine::{solve, SeparableHarmoniousCheck};
use crate::graph::Graph;
use crate::oracle::{exact_coloring, generate, graphs_up_to_iso, GenClass, GeneratorSpec, OracleBudget};
use crate::validators::ColoringFamily;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SelftestConfig {
    /// Every P4-tidy graph up to isomorphism on at most this many vertices.
    pub n_max: usize,
    /// Generated class members.
    pub samples: usize,
    /// Largest generated instance.
    pub sample_max_n: usize,
    pub seed: u64,
}

impl Default for SelftestConfig {
    fn default() -> Self {
        SelftestConfig {
            n_max: 7,
            samples: 500,
            sample_max_n: 10,
            seed: 0,
        }
    }
}

/// Classes cycled through by the sampled part of the suite.
pub const SAMPLE_CLASSES: [GenClass; 7] = [
    GenClass::Cograph,
    GenClass::P4Sparse,
    GenClass::Qq4 { q: 6 },
    GenClass::Qq4 { q: 7 },
    GenClass::Qq4 { q: 8 },
    GenClass::P4Tidy,
    GenClass::P4Tidy,
];

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Instance {
    pub index: usize,
    pub source: String,
    pub mode: Mode,
    pub n: usize,
    pub edges: Vec<(usize, usize)>,
}

impl Instance {
    pub fn graph(&self) -> Graph {
        Graph::from_edges(self.n, self.edges.iter().copied()).expect("instance edges are valid")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Discrepancy {
    pub instance: usize,
    pub variant: ColoringFamily,
    pub engine: Option<usize>,
    pub oracle: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StatementMismatch {
    pub instance: usize,
    pub check: SeparableHarmoniousCheck,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SelftestReport {
    pub instances: usize,
    pub comparisons: usize,
    pub fallbacks: usize,
    pub separable_harmonious_checks: usize,
    pub discrepancies: Vec<Discrepancy>,
    pub statement_mismatches: Vec<StatementMismatch>,
    /// Instances named by a discrepancy or mismatch.
    pub flagged: Vec<Instance>,
}

impl SelftestReport {
    pub fn passed(&self) -> bool {
        self.discrepancies.is_empty()
    }
}

pub fn instances(config: &SelftestConfig) -> Vec<Instance> {
    let mut out = Vec::new();
    for n in 1..=config.n_max {
        for g in graphs_up_to_iso(n) {
            if is_p4_tidy(&g) {
                push(&mut out, format!("exhaustive n={n}"), Mode::P4Tidy, &g);
            }
        }
    }
    for i in 0..config.samples {
        let class = SAMPLE_CLASSES[i % SAMPLE_CLASSES.len()];
        let seed = config.seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(i as u64);
        let (g, _) = generate(&GeneratorSpec::new(class, 1, config.sample_max_n, seed));
        push(&mut out, format!("generated {class:?} seed={seed}"), class.mode(), &g);
    }
    out
}

fn push(out: &mut Vec<Instance>, source: String, mode: Mode, g: &Graph) {
    out.push(Instance {
        index: out.len(),
        source,
        mode,
        n: g.n(),
        edges: g.edges().collect(),
    });
}

struct Outcome {
    comparisons: usize,
    fallbacks: usize,
    checks: usize,
    discrepancies: Vec<Discrepancy>,
    mismatches: Vec<StatementMismatch>,
}

fn run_instance(inst: &Instance, budget: &OracleBudget) -> Outcome {
    let g = inst.graph();
    let mut out = Outcome {
        comparisons: 0,
        fallbacks: 0,
        checks: 0,
        discrepancies: Vec::new(),
        mismatches: Vec::new(),
    };
    for variant in ColoringFamily::RESTRICTED {
        if variant == ColoringFamily::Harmonious && !g.is_connected() {
            continue;
        }
        out.comparisons += 1;
        let oracle = exact_coloring(&g, variant, budget).map(|c| c.colors_used());
        let engine = solve(&g, variant, inst.mode);
        if let Ok(r) = &engine {
            out.fallbacks += r.fallbacks().count();
            out.checks += r.separable_checks.len();
            out.mismatches.extend(
                r.separable_checks
                    .iter()
                    .filter(|c| c.statement_differs())
                    .map(|&check| StatementMismatch {
                        instance: inst.index,
                        check,
                    }),
            );
        }
        let agree = matches!((&engine, &oracle), (Ok(r), Ok(o)) if r.value == *o);
        if !agree {
            let error = match (&engine, &oracle) {
                (Err(e), _) => Some(format!("engine: {e}")),
                (_, Err(e)) => Some(format!("oracle: {e}")),
                _ => None,
            };
            out.discrepancies.push(Discrepancy {
                instance: inst.index,
                variant,
                engine: engine.as_ref().ok().map(|r| r.value),
                oracle: oracle.ok(),
                error,
            });
        }
    }
    out
}

pub fn run(config: &SelftestConfig) -> SelftestReport {
    run_on(&instances(config), &OracleBudget::default())
}

pub fn run_on(instances: &[Instance], budget: &OracleBudget) -> SelftestReport {
    let outcomes: Vec<Outcome> = instances.par_iter().map(|inst| run_instance(inst, budget)).collect();
    let mut report = SelftestReport {
        instances: instances.len(),
        ..SelftestReport::default()
    };
    let mut flagged = std::collections::BTreeSet::new();
    for o in outcomes {
        report.comparisons += o.comparisons;
        report.fallbacks += o.fallbacks;
        report.separable_harmonious_checks += o.checks;
        flagged.extend(o.discrepancies.iter().map(|d| d.instance));
        flagged.extend(o.mismatches.iter().map(|m| m.instance));
        report.discrepancies.extend(o.discrepancies);
        report.statement_mismatches.extend(o.mismatches);
    }
    report.flagged = flagged.into_iter().map(|i| instances[i].clone()).collect();
    report
}
