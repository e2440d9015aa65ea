//! WebAssembly bindings for the demo page in `www/`.
//!
//! Every export takes and returns strings. Results are JSON; failures are
//! `{"error": "..."}` so the page has a single code path.

use serde::Serialize;
use serde_json::json;
use wasm_bindgen::prelude::*;

use primeval::oracle::{generate, GenClass, GeneratorSpec};
use primeval::{build_tree, compute_q, is_p4_tidy, parse_graph, solve, ColoringFamily, Graph, GraphFormat, Mode};

/// Largest graph the page will color; the exhaustive leaves get slow past it.
const MAX_COLOR_VERTICES: usize = 60;

#[derive(Serialize)]
struct Drawing {
    n: usize,
    edges: Vec<(usize, usize)>,
}

fn drawing(g: &Graph) -> Drawing {
    Drawing {
        n: g.n(),
        edges: g.edges().collect(),
    }
}

fn error(msg: impl std::fmt::Display) -> String {
    json!({ "error": msg.to_string() }).to_string()
}

fn read(text: &str) -> Result<Graph, String> {
    let format = GraphFormat::detect(None, text);
    parse_graph(text, format).map_err(|e| format!("line {e}"))
}

/// `auto`, `p4tidy`, or `qq4:<q>`.
fn mode_of(spec: &str, g: &Graph) -> Result<Mode, String> {
    match spec.trim() {
        "" | "auto" if is_p4_tidy(g) => Ok(Mode::P4Tidy),
        "" | "auto" => Ok(Mode::Qq4 { q: compute_q(g).q }),
        "p4tidy" => Ok(Mode::P4Tidy),
        other => {
            let q = other
                .strip_prefix("qq4:")
                .and_then(|q| q.parse::<usize>().ok())
                .filter(|&q| q >= 4)
                .ok_or_else(|| format!("unknown mode `{other}`"))?;
            Ok(Mode::Qq4 { q })
        }
    }
}

#[wasm_bindgen]
pub fn decompose(text: &str, mode: &str) -> String {
    let run = || -> Result<String, String> {
        let g = read(text)?;
        let mode = mode_of(mode, &g)?;
        let tree = build_tree(&g, mode).map_err(|e| e.to_string())?;
        Ok(json!({ "graph": drawing(&g), "tree": tree, "dot": tree.to_dot() }).to_string())
    };
    run().unwrap_or_else(error)
}

#[wasm_bindgen]
pub fn color(text: &str, variant: &str, mode: &str) -> String {
    let run = || -> Result<String, String> {
        let g = read(text)?;
        if g.n() > MAX_COLOR_VERTICES {
            return Err(format!("the demo colors graphs with at most {MAX_COLOR_VERTICES} vertices"));
        }
        let family: ColoringFamily = variant.parse()?;
        let mode = mode_of(mode, &g)?;
        let r = solve(&g, family, mode).map_err(|e| e.to_string())?;
        Ok(json!({
            "graph": drawing(&g),
            "mode": mode.to_string(),
            "variant": r.variant,
            "value": r.value,
            "witness": r.witness.colors(),
            "trace": r.trace,
        })
        .to_string())
    };
    run().unwrap_or_else(error)
}

/// A random member of `class` (`cograph`, `p4sparse`, `p4tidy` or
/// `qq4:<q>`) as an edge list.
#[wasm_bindgen]
pub fn random_graph(class: &str, max_n: u32, seed: u32) -> String {
    let class = match class.trim() {
        "cograph" => GenClass::Cograph,
        "p4sparse" => GenClass::P4Sparse,
        "p4tidy" => GenClass::P4Tidy,
        other => match other.strip_prefix("qq4:").and_then(|q| q.parse::<usize>().ok()) {
            Some(q) if (4..=10).contains(&q) => GenClass::Qq4 { q },
            _ => return error(format!("unknown class `{other}`")),
        },
    };
    let max_n = (max_n as usize).clamp(1, 40);
    let (g, _) = generate(&GeneratorSpec::new(class, 1, max_n, u64::from(seed)));
    json!({ "graph": drawing(&g), "text": primeval::io::to_edge_list(&g) }).to_string()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(s: &str) -> serde_json::Value {
        serde_json::from_str(s).unwrap()
    }

    #[test]
    fn decompose_a_cograph() {
        let v = parse(&decompose("0 1\n0 2\n", "auto"));
        assert_eq!(v["tree"]["nodes"][0]["kind"], "join");
        assert_eq!(v["graph"]["n"], 3);
    }

    #[test]
    fn color_p4() {
        let v = parse(&color("0 1\n1 2\n2 3\n", "thue", "auto"));
        assert_eq!(v["value"], 3);
        assert_eq!(v["witness"].as_array().unwrap().len(), 4);
    }

    #[test]
    fn errors_are_json() {
        assert!(parse(&color("0 0\n", "star", "auto"))["error"].is_string());
        assert!(parse(&color("0 1\n", "purple", "auto"))["error"].is_string());
        assert!(parse(&decompose("0 1\n1 2\n2 3\n", "qq4:4"))["error"].is_string());
        assert!(parse(&random_graph("trees", 5, 1))["error"].is_string());
    }

    #[test]
    fn random_graphs_round_trip_through_color() {
        for (i, class) in ["cograph", "p4sparse", "p4tidy", "qq4:7"].iter().enumerate() {
            let v = parse(&random_graph(class, 10, i as u32));
            let text = v["text"].as_str().unwrap();
            let c = parse(&color(text, "acyclic", "auto"));
            assert!(c["value"].is_u64(), "{c}");
        }
    }
}
