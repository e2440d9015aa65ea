//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero when any criterion fails.

use std::process::ExitCode;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use primeval::decomposition::{build_tree, compute_q, is_p4_tidy, Mode};
use primeval::engine::{solve, two_clique_color, SeparableHarmoniousCheck};
use primeval::graph::named::{cycle, path};
use primeval::oracle::{exact_coloring, family_colorings, generate, graphs_up_to_iso, GenClass, GeneratorSpec, OracleBudget};
use primeval::validators::{is_clique_coloring, is_nonrepetitive};
use primeval::{ColoringFamily, Graph, QValue};

struct Verdict {
    pass: bool,
    detail: String,
}

impl Verdict {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Verdict {
            pass,
            detail: detail.into(),
        }
    }
}

/// Separable harmonious checks gathered by criteria 1 and 2 for criterion 9.
#[derive(Default)]
struct Ledger {
    checks: Vec<(String, SeparableHarmoniousCheck)>,
}

fn edges(g: &Graph) -> Vec<(usize, usize)> {
    g.edges().collect()
}

fn oracle_value(g: &Graph, f: ColoringFamily) -> usize {
    exact_coloring(g, f, &OracleBudget::default())
        .expect("within the oracle budget")
        .colors_used()
}

/// Engine against oracle on one instance; returns mismatch descriptions and
/// the number of fallback events.
fn compare(g: &Graph, mode: Mode, label: &str, ledger: &mut Ledger) -> (Vec<String>, usize) {
    let mut bad = Vec::new();
    let mut fallbacks = 0;
    for f in ColoringFamily::RESTRICTED {
        if f == ColoringFamily::Harmonious && !g.is_connected() {
            continue;
        }
        let expected = oracle_value(g, f);
        match solve(g, f, mode) {
            Ok(r) => {
                fallbacks += r.fallbacks().count();
                ledger
                    .checks
                    .extend(r.separable_checks.iter().map(|c| (format!("{label} {:?}", edges(g)), *c)));
                let valid = primeval::validators::check(f, g, &r.witness).unwrap_or(false);
                if r.value != expected || !valid || r.witness.colors_used() != r.value {
                    bad.push(format!("{label} {f}: engine {} oracle {expected} on {:?}", r.value, edges(g)));
                }
            }
            Err(e) => bad.push(format!("{label} {f}: engine error {e} on {:?}", edges(g))),
        }
    }
    (bad, fallbacks)
}

fn criterion_1(ledger: &mut Ledger) -> Verdict {
    let mut graphs = 0;
    let mut bad = Vec::new();
    let mut fallbacks = 0;
    for n in 1..=7 {
        for g in graphs_up_to_iso(n) {
            if !is_p4_tidy(&g) {
                continue;
            }
            graphs += 1;
            let (b, f) = compare(&g, Mode::P4Tidy, &format!("n={n}"), ledger);
            bad.extend(b);
            fallbacks += f;
        }
    }
    summarize(graphs, &bad, fallbacks, "P4-tidy graphs up to isomorphism with n <= 7")
}

fn summarize(count: usize, bad: &[String], fallbacks: usize, what: &str) -> Verdict {
    let mut detail = format!("{count} {what}, {} mismatches, {fallbacks} oracle fallbacks logged", bad.len());
    for b in bad.iter().take(5) {
        detail.push_str(&format!("\n      {b}"));
    }
    Verdict::new(bad.is_empty(), detail)
}

fn criterion_2(ledger: &mut Ledger) -> Verdict {
    let classes = [
        GenClass::Cograph,
        GenClass::Qq4 { q: 5 },
        GenClass::Qq4 { q: 6 },
        GenClass::Qq4 { q: 7 },
        GenClass::Qq4 { q: 8 },
        GenClass::P4Tidy,
    ];
    let mut bad = Vec::new();
    let mut fallbacks = 0;
    for i in 0..500u64 {
        let class = classes[i as usize % classes.len()];
        let (g, _) = generate(&GeneratorSpec::new(class, 1, 10, 0xACCE_0000 + i));
        assert!(g.n() <= 10);
        let (b, f) = compare(&g, class.mode(), &format!("{class:?} seed {i}"), ledger);
        bad.extend(b);
        fallbacks += f;
    }
    summarize(500, &bad, fallbacks, "generated class members with n <= 10")
}

/// C = {0,1,2} a clique, S = {3,4,5}, each s_i adjacent to every c_j, j != i.
fn thick_spider_k3() -> Graph {
    let mut g = Graph::new(6);
    for (a, b) in [(0, 1), (0, 2), (1, 2)] {
        g.add_edge(a, b).unwrap();
    }
    for i in 0..3 {
        for j in 0..3 {
            if i != j {
                g.add_edge(j, 3 + i).unwrap();
            }
        }
    }
    g
}

fn criterion_3() -> Verdict {
    let fixtures: [(&str, Graph, ColoringFamily, usize); 6] = [
        ("acyclic(C5)", cycle(5), ColoringFamily::Acyclic, 3),
        ("star(C5)", cycle(5), ColoringFamily::Star, 4),
        ("clique(C5)", cycle(5), ColoringFamily::Clique, 2),
        ("thue(P4)", path(4), ColoringFamily::Nonrepetitive, 3),
        ("harmonious(P4)", path(4), ColoringFamily::Harmonious, 3),
        ("star(thick spider k=3, R empty)", thick_spider_k3(), ColoringFamily::Star, 4),
    ];
    let mut pass = true;
    let mut lines = Vec::new();
    for (name, g, f, listed) in fixtures {
        let oracle = oracle_value(&g, f);
        let engine = solve(&g, f, Mode::P4Tidy).map(|r| r.value);
        let ok = oracle == listed && engine.as_ref() == Ok(&listed);
        pass &= ok;
        let mut line = format!("{name}: listed {listed}, oracle {oracle}, engine {engine:?}");
        if !ok && name == "clique(C5)" {
            line.push_str(
                " -- the maximal cliques of C5 are its five edges, so a clique coloring of C5 is a proper \
                 coloring and needs 3 colors; the listed value cannot be met",
            );
        }
        lines.push(format!("{}{line}", if ok { "ok   " } else { "FAIL " }));
    }
    let spider_ok = oracle_value(&thick_spider_k3(), ColoringFamily::Star) == 3 + 1;
    pass &= spider_ok;
    lines.push(format!("thick spider value equals k+1 = 4: {spider_ok}"));
    Verdict::new(pass, format!("\n      {}", lines.join("\n      ")))
}

fn criterion_4() -> Verdict {
    let mut done = 0;
    let mut bad = Vec::new();
    let mut seed = 0u64;
    while done < 200 {
        let q = 4 + done % 5;
        seed += 1;
        let (g, _) = generate(&GeneratorSpec::new(GenClass::Qq4 { q }, q, q + 8, 0xC11C_0000 + seed));
        if !g.is_connected() || g.n() < q {
            continue;
        }
        done += 1;
        match two_clique_color(&g, QValue { q }) {
            Ok(c) if c.colors_used() <= 2 && is_clique_coloring(&g, &c).unwrap_or(false) => {}
            Ok(c) => bad.push(format!("q={q} invalid {:?} on {:?}", c.colors(), edges(&g))),
            Err(e) => bad.push(format!("q={q} {e} on {:?}", edges(&g))),
        }
    }
    let mut detail = format!("{done} connected (q,q-4)-graphs with n >= q, q in 4..=8, {} failures", bad.len());
    for b in bad.iter().take(5) {
        detail.push_str(&format!("\n      {b}"));
    }
    Verdict::new(bad.is_empty(), detail)
}

fn cographs_up_to(n_max: usize) -> Vec<Graph> {
    (1..=n_max)
        .flat_map(graphs_up_to_iso)
        .filter(|g| g.p4_count() == 0)
        .collect()
}

fn criterion_5() -> Verdict {
    let mut colorings = 0;
    let mut bad = Vec::new();
    let graphs = cographs_up_to(7);
    for g in &graphs {
        let all = family_colorings(g, ColoringFamily::Acyclic, None, &OracleBudget::default()).expect("small");
        for c in all {
            colorings += 1;
            if !is_nonrepetitive(g, &c).unwrap() {
                bad.push(format!("{:?} on {:?}", c.colors(), edges(g)));
            }
        }
    }
    Verdict::new(
        bad.is_empty(),
        format!(
            "{} cographs with n <= 7, {colorings} acyclic colorings checked, {} not nonrepetitive",
            graphs.len(),
            bad.len()
        ),
    )
}

fn criterion_6() -> Verdict {
    let mut graphs = cographs_up_to(7);
    for seed in 0..200 {
        graphs.push(generate(&GeneratorSpec::new(GenClass::Cograph, 8, 16, 0xC06_0000 + seed)).0);
    }
    let mut bad = Vec::new();
    for g in &graphs {
        let mode = Mode::Qq4 { q: 4 };
        let values: Vec<usize> = [ColoringFamily::Acyclic, ColoringFamily::Star, ColoringFamily::Nonrepetitive]
            .iter()
            .map(|&f| solve(g, f, mode).map(|r| r.value).unwrap_or(usize::MAX))
            .collect();
        if values.iter().any(|&v| v != values[0]) {
            bad.push(format!("{values:?} on {:?}", edges(g)));
        }
    }
    let mut detail = format!("{} cographs (all with n <= 7, 200 generated with 8 <= n <= 16), {} collapse failures", graphs.len(), bad.len());
    for b in bad.iter().take(5) {
        detail.push_str(&format!("\n      {b}"));
    }
    Verdict::new(bad.is_empty(), detail)
}

/// Induced P4s on each vertex subset, by brute force.
fn naive_is_qq4(g: &Graph, q: usize) -> bool {
    let n = g.n();
    let quads: Vec<u32> = g
        .enumerate_p4s()
        .iter()
        .map(|p| p.iter().fold(0u32, |m, &v| m | 1 << v))
        .collect();
    (0u32..1 << n)
        .filter(|s| s.count_ones() as usize <= q)
        .all(|s| quads.iter().filter(|&&p| p & s == p).count() <= q - 4)
}

/// At most one vertex outside each P4 that lies in another P4 with three of
/// its vertices.
fn naive_is_p4_tidy(g: &Graph) -> bool {
    let p4s: Vec<u32> = g
        .enumerate_p4s()
        .iter()
        .map(|p| p.iter().fold(0u32, |m, &v| m | 1 << v))
        .collect();
    p4s.iter().all(|&p| {
        let partners = (0..g.n())
            .filter(|&v| p >> v & 1 == 0)
            .filter(|&v| {
                let five = p | 1 << v;
                p4s.iter().filter(|&&o| o & five == o).count() >= 2
            })
            .count();
        partners <= 1
    })
}

fn criterion_7() -> Verdict {
    let mut checked = 0;
    let mut bad = Vec::new();
    for n in 0..=7 {
        for g in graphs_up_to_iso(n) {
            let tidy = build_tree(&g, Mode::P4Tidy).is_ok();
            checked += 1;
            if tidy != naive_is_p4_tidy(&g) || tidy != is_p4_tidy(&g) {
                bad.push(format!("P4-tidy tree {tidy} on {:?}", edges(&g)));
            }
            for q in 4..=8 {
                let accepted = build_tree(&g, Mode::Qq4 { q }).is_ok();
                checked += 1;
                if accepted != naive_is_qq4(&g, q) {
                    bad.push(format!("q={q} tree {accepted} on {:?}", edges(&g)));
                }
            }
        }
    }
    let cographs = cographs_up_to(7);
    let cograph_q = cographs.iter().all(|g| compute_q(g).q == 4);
    let p4_q = compute_q(&path(4)).q;
    let pass = bad.is_empty() && cograph_q && p4_q == 5;
    let mut detail = format!(
        "{checked} (graph, class) pairs over all graphs with n <= 7, {} disagreements; compute_q = 4 on all {} cographs: {cograph_q}; compute_q(P4) = {p4_q}",
        bad.len(),
        cographs.len()
    );
    for b in bad.iter().take(5) {
        detail.push_str(&format!("\n      {b}"));
    }
    Verdict::new(pass, detail)
}

fn criterion_8() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(0xC0_4417);
    let mut bad = Vec::new();
    for _ in 0..200 {
        let n = rng.gen_range(1..=8);
        let p: f64 = rng.gen_range(0.1..0.9);
        let mut g = Graph::new(n);
        for u in 0..n {
            for v in u + 1..n {
                if rng.gen_bool(p) {
                    g.add_edge(u, v).unwrap();
                }
            }
        }
        let h = g.complement();
        if compute_q(&g) != compute_q(&h) || is_p4_tidy(&g) != is_p4_tidy(&h) {
            bad.push(format!("{:?}", edges(&g)));
        }
    }
    Verdict::new(bad.is_empty(), format!("200 random graphs with n <= 8, {} closure failures", bad.len()))
}

fn criterion_9(ledger: &Ledger) -> Verdict {
    let differing: Vec<_> = ledger.checks.iter().filter(|(_, c)| c.statement_differs()).collect();
    let mut detail = format!(
        "{} separable harmonious nodes checked in criteria 1-2; n' + min k differs from min(k + max(n' - |cZ|, 0)) on {}",
        ledger.checks.len(),
        differing.len()
    );
    for (label, c) in &differing {
        detail.push_str(&format!(
            "\n      {label} node {}: n' = {}, n' + min k = {}, proof formula = {}, exact = {}",
            c.node, c.rest_size, c.statement_value, c.proof_value, c.exact_value
        ));
    }
    let below_exact = ledger.checks.iter().filter(|(_, c)| c.proof_value < c.exact_value).count();
    detail.push_str(&format!("\n      proof formula below the exact optimum on {below_exact} nodes"));
    Verdict::new(true, detail)
}

type Criterion = Box<dyn FnOnce(&mut Ledger) -> Verdict>;

fn main() -> ExitCode {
    let mut ledger = Ledger::default();
    let criteria: Vec<(&str, Criterion)> = vec![
        ("engine equals oracle on small P4-tidy graphs", Box::new(criterion_1)),
        ("engine equals oracle on generated class members", Box::new(criterion_2)),
        ("frozen fixtures", Box::new(|_: &mut Ledger| criterion_3())),
        ("2-clique-colorings of connected (q,q-4)-graphs", Box::new(|_: &mut Ledger| criterion_4())),
        ("acyclic colorings of cographs are nonrepetitive", Box::new(|_: &mut Ledger| criterion_5())),
        ("acyclic, star and Thue numbers coincide on cographs", Box::new(|_: &mut Ledger| criterion_6())),
        ("recognition agrees with the definitions", Box::new(|_: &mut Ledger| criterion_7())),
        ("q-value and P4-tidiness are closed under complement", Box::new(|_: &mut Ledger| criterion_8())),
        ("separable harmonious statement-versus-proof report", Box::new(|l: &mut Ledger| criterion_9(l))),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let v = run(&mut ledger);
        failed += usize::from(!v.pass);
        println!(
            "criterion {} {} {name} ({:.1}s): {}",
            i + 1,
            if v.pass { "PASS" } else { "FAIL" },
            start.elapsed().as_secs_f64(),
            v.detail
        );
    }
    println!("acceptance: {} of 9 criteria passed", 9 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
