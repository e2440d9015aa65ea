//! Reading and writing graphs: whitespace edge lists, DIMACS and JSON.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Graph, GraphError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GraphFormat {
    EdgeList,
    Dimacs,
    Json,
}

impl GraphFormat {
    /// Guess from a file name, falling back to the first meaningful
    /// character of the text.
    pub fn detect(name: Option<&str>, text: &str) -> GraphFormat {
        let ext = name.and_then(|n| n.rsplit_once('.')).map(|(_, e)| e.to_ascii_lowercase());
        match ext.as_deref() {
            Some("json") => return GraphFormat::Json,
            Some("dimacs" | "col" | "dim") => return GraphFormat::Dimacs,
            Some("edges" | "el" | "txt") => return GraphFormat::EdgeList,
            _ => {}
        }
        let first = text
            .lines()
            .map(str::trim)
            .find(|l| !l.is_empty() && !l.starts_with('#') && !l.starts_with("c ") && *l != "c");
        match first {
            Some(l) if l.starts_with('{') => GraphFormat::Json,
            Some(l) if l.starts_with("p ") || l.starts_with("e ") => GraphFormat::Dimacs,
            _ => GraphFormat::EdgeList,
        }
    }
}

impl FromStr for GraphFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "edgelist" | "edge-list" | "edges" => Ok(GraphFormat::EdgeList),
            "dimacs" => Ok(GraphFormat::Dimacs),
            "json" => Ok(GraphFormat::Json),
            other => Err(format!("unknown graph format `{other}`")),
        }
    }
}

impl fmt::Display for GraphFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GraphFormat::EdgeList => "edgelist",
            GraphFormat::Dimacs => "dimacs",
            GraphFormat::Json => "json",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("{0}")]
    Syntax(String),
    #[error("vertex {vertex} out of range for {n} vertices")]
    OutOfRange { vertex: i64, n: usize },
    #[error("self-loop on vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge {0}-{1}")]
    DuplicateEdge(usize, usize),
    #[error("header announces {expected} edges, found {found}")]
    EdgeCount { expected: usize, found: usize },
    #[error("missing `p edge` header")]
    MissingHeader,
    #[error("{0}")]
    Graph(GraphError),
}

/// A parse failure at a 1-based line and column.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("{line}:{column}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub kind: ParseErrorKind,
}

impl ParseError {
    fn at(line: usize, column: usize, kind: ParseErrorKind) -> Self {
        ParseError { line, column, kind }
    }
}

pub fn parse_graph(text: &str, format: GraphFormat) -> Result<Graph, ParseError> {
    match format {
        GraphFormat::EdgeList => parse_edge_list(text),
        GraphFormat::Dimacs => parse_dimacs(text),
        GraphFormat::Json => parse_json(text),
    }
}

/// Whitespace-separated tokens of a line with their 1-based columns.
fn tokens(line: &str) -> impl Iterator<Item = (usize, &str)> {
    line.split_whitespace().map(move |t| (t.as_ptr() as usize - line.as_ptr() as usize + 1, t))
}

fn number(tok: (usize, &str), line: usize) -> Result<i64, ParseError> {
    tok.1
        .parse::<i64>()
        .map_err(|_| ParseError::at(line, tok.0, ParseErrorKind::Syntax(format!("expected an integer, found `{}`", tok.1))))
}

/// Largest vertex count accepted from input; adjacency is quadratic in it.
pub const MAX_VERTICES: usize = 20_000;

fn check_size(n: usize, line: usize, column: usize) -> Result<(), ParseError> {
    if n > MAX_VERTICES {
        return Err(ParseError::at(
            line,
            column,
            ParseErrorKind::Syntax(format!("{n} vertices exceed the limit of {MAX_VERTICES}")),
        ));
    }
    Ok(())
}

struct EdgeCollector {
    edges: Vec<(usize, usize, usize, usize)>,
}

impl EdgeCollector {
    fn build(self, n: usize) -> Result<Graph, ParseError> {
        let mut g = Graph::new(n);
        for (u, v, line, column) in self.edges {
            if g.has_edge(u, v) {
                return Err(ParseError::at(line, column, ParseErrorKind::DuplicateEdge(u.min(v), u.max(v))));
            }
            g.add_edge(u, v).map_err(|e| ParseError::at(line, column, ParseErrorKind::Graph(e)))?;
        }
        Ok(g)
    }
}

/// One `u v` pair per line, 0-indexed; a lone integer declares a vertex.
fn parse_edge_list(text: &str) -> Result<Graph, ParseError> {
    let mut n = 0usize;
    let mut collector = EdgeCollector { edges: Vec::new() };
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("");
        let toks: Vec<(usize, &str)> = tokens(content).collect();
        let mut ids = Vec::with_capacity(2);
        for &tok in &toks {
            let x = number(tok, line)?;
            if x < 0 {
                return Err(ParseError::at(line, tok.0, ParseErrorKind::OutOfRange { vertex: x, n }));
            }
            ids.push(x as usize);
        }
        match ids.as_slice() {
            [] => {}
            [v] => {
                check_size(v + 1, line, toks[0].0)?;
                n = n.max(v + 1);
            }
            [u, v] => {
                check_size(u.max(v) + 1, line, toks[0].0)?;
                if u == v {
                    return Err(ParseError::at(line, toks[0].0, ParseErrorKind::SelfLoop(*u)));
                }
                n = n.max(u + 1).max(v + 1);
                collector.edges.push((*u, *v, line, toks[0].0));
            }
            _ => {
                return Err(ParseError::at(
                    line,
                    toks[2].0,
                    ParseErrorKind::Syntax("expected at most two vertices per line".into()),
                ))
            }
        }
    }
    collector.build(n)
}

/// `p edge n m` header, then 1-indexed `e u v` lines; `c` lines are comments.
fn parse_dimacs(text: &str) -> Result<Graph, ParseError> {
    let mut header: Option<(usize, usize)> = None;
    let mut collector = EdgeCollector { edges: Vec::new() };
    let mut last_line = 0;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        last_line = line;
        let toks: Vec<(usize, &str)> = tokens(raw).collect();
        let Some(&(col, head)) = toks.first() else { continue };
        match head {
            "c" => {}
            "p" => {
                if header.is_some() {
                    return Err(ParseError::at(line, col, ParseErrorKind::Syntax("second `p` header".into())));
                }
                if toks.len() != 4 || !matches!(toks[1].1, "edge" | "col") {
                    return Err(ParseError::at(line, col, ParseErrorKind::Syntax("expected `p edge <n> <m>`".into())));
                }
                let n = number(toks[2], line)?;
                let m = number(toks[3], line)?;
                if n < 0 || m < 0 {
                    return Err(ParseError::at(line, col, ParseErrorKind::Syntax("negative count in header".into())));
                }
                check_size(n as usize, line, toks[2].0)?;
                header = Some((n as usize, m as usize));
            }
            "e" => {
                let Some((n, _)) = header else {
                    return Err(ParseError::at(line, col, ParseErrorKind::MissingHeader));
                };
                if toks.len() != 3 {
                    return Err(ParseError::at(line, col, ParseErrorKind::Syntax("expected `e <u> <v>`".into())));
                }
                let mut ends = [0usize; 2];
                for (slot, &tok) in ends.iter_mut().zip(&toks[1..]) {
                    let x = number(tok, line)?;
                    if x < 1 || x as usize > n {
                        return Err(ParseError::at(line, tok.0, ParseErrorKind::OutOfRange { vertex: x, n }));
                    }
                    *slot = x as usize - 1;
                }
                if ends[0] == ends[1] {
                    return Err(ParseError::at(line, toks[1].0, ParseErrorKind::SelfLoop(ends[0] + 1)));
                }
                collector.edges.push((ends[0], ends[1], line, toks[1].0));
            }
            other => {
                return Err(ParseError::at(line, col, ParseErrorKind::Syntax(format!("unknown line type `{other}`"))));
            }
        }
    }
    let (n, m) = header.ok_or(ParseError::at(last_line.max(1), 1, ParseErrorKind::MissingHeader))?;
    if collector.edges.len() != m {
        return Err(ParseError::at(
            last_line.max(1),
            1,
            ParseErrorKind::EdgeCount {
                expected: m,
                found: collector.edges.len(),
            },
        ));
    }
    collector.build(n)
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct JsonGraph {
    n: usize,
    edges: Vec<(i64, i64)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    labels: Option<Vec<String>>,
}

/// `{"n": 4, "edges": [[0, 1], ...], "labels": [...]}`; positions of
/// semantic errors point at the start of the document.
fn parse_json(text: &str) -> Result<Graph, ParseError> {
    let doc: JsonGraph = serde_json::from_str(text)
        .map_err(|e| ParseError::at(e.line().max(1), e.column().max(1), ParseErrorKind::Syntax(e.to_string())))?;
    let (line, column) = json_start(text);
    check_size(doc.n, line, column)?;
    let mut collector = EdgeCollector { edges: Vec::new() };
    for &(u, v) in &doc.edges {
        for x in [u, v] {
            if x < 0 || x as usize >= doc.n {
                return Err(ParseError::at(line, column, ParseErrorKind::OutOfRange { vertex: x, n: doc.n }));
            }
        }
        if u == v {
            return Err(ParseError::at(line, column, ParseErrorKind::SelfLoop(u as usize)));
        }
        collector.edges.push((u as usize, v as usize, line, column));
    }
    let g = collector.build(doc.n)?;
    match doc.labels {
        Some(labels) => g
            .with_labels(labels)
            .map_err(|e| ParseError::at(line, column, ParseErrorKind::Graph(e))),
        None => Ok(g),
    }
}

fn json_start(text: &str) -> (usize, usize) {
    for (i, l) in text.lines().enumerate() {
        if let Some(c) = l.find(|ch: char| !ch.is_whitespace()) {
            return (i + 1, c + 1);
        }
    }
    (1, 1)
}

pub fn to_json(g: &Graph) -> String {
    let doc = JsonGraph {
        n: g.n(),
        edges: g.edges().map(|(u, v)| (u as i64, v as i64)).collect(),
        labels: g.labels().map(<[String]>::to_vec),
    };
    serde_json::to_string(&doc).expect("graph serializes")
}

pub fn to_edge_list(g: &Graph) -> String {
    let mut out = String::new();
    for v in 0..g.n() {
        if g.degree(v) == 0 {
            out.push_str(&format!("{v}\n"));
        }
    }
    for (u, v) in g.edges() {
        out.push_str(&format!("{u} {v}\n"));
    }
    out
}

pub fn to_dimacs(g: &Graph) -> String {
    let mut out = format!("p edge {} {}\n", g.n(), g.edge_count());
    for (u, v) in g.edges() {
        out.push_str(&format!("e {} {}\n", u + 1, v + 1));
    }
    out
}

/// Plain DOT rendering of a graph.
pub fn to_dot(g: &Graph) -> String {
    let mut out = String::from("graph G {\n");
    for v in 0..g.n() {
        match g.labels() {
            Some(l) => out.push_str(&format!("  {v} [label={:?}];\n", l[v])),
            None => out.push_str(&format!("  {v};\n")),
        }
    }
    for (u, v) in g.edges() {
        out.push_str(&format!("  {u} -- {v};\n"));
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::named::path;

    #[test]
    fn dimacs_k2() {
        let g = parse_graph("p edge 2 1\ne 1 2\n", GraphFormat::Dimacs).unwrap();
        assert_eq!(g, Graph::from_edges(2, [(0, 1)]).unwrap());
    }

    #[test]
    fn edge_list_p4() {
        let g = parse_graph("0 1\n1 2\n2 3", GraphFormat::EdgeList).unwrap();
        assert_eq!(g, path(4));
    }

    #[test]
    fn dimacs_self_loop() {
        let err = parse_graph("p edge 2 1\ne 1 1\n", GraphFormat::Dimacs).unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::SelfLoop(1));
        assert_eq!((err.line, err.column), (2, 3));
    }

    #[test]
    fn dimacs_count_mismatch() {
        let err = parse_graph("p edge 3 2\ne 1 2\n", GraphFormat::Dimacs).unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::EdgeCount { expected: 2, found: 1 });
    }

    #[test]
    fn edge_list_comments_and_isolated() {
        let g = parse_graph("# a triangle and a loner\n0 1 # first\n1 2\n0 2\n\n4\n", GraphFormat::EdgeList).unwrap();
        assert_eq!(g.n(), 5);
        assert_eq!(g.edge_count(), 3);
        assert_eq!(g.degree(4), 0);
    }

    #[test]
    fn duplicates_are_rejected() {
        let err = parse_graph("0 1\n1 0\n", GraphFormat::EdgeList).unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::DuplicateEdge(0, 1));
        assert_eq!(err.line, 2);
        let err = parse_graph(r#"{"n": 3, "edges": [[0, 1], [0, 1]]}"#, GraphFormat::Json).unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::DuplicateEdge(0, 1));
    }

    #[test]
    fn bad_tokens_carry_positions() {
        let err = parse_graph("0 1\n1 x\n", GraphFormat::EdgeList).unwrap_err();
        assert_eq!((err.line, err.column), (2, 3));
        let err = parse_graph("{\"n\": 2,\n \"edges\": [[0, 1]\n", GraphFormat::Json).unwrap_err();
        assert_eq!(err.line, 3);
    }

    #[test]
    fn json_round_trip_with_labels() {
        let g = path(3).with_labels(vec!["a".into(), "b".into(), "c".into()]).unwrap();
        let back = parse_graph(&to_json(&g), GraphFormat::Json).unwrap();
        assert_eq!(back, g);
        assert_eq!(parse_graph(&to_dimacs(&g), GraphFormat::Dimacs).unwrap().edge_count(), 2);
        assert_eq!(parse_graph(&to_edge_list(&Graph::new(2)), GraphFormat::EdgeList).unwrap().n(), 2);
    }

    #[test]
    fn detection() {
        assert_eq!(GraphFormat::detect(Some("g.json"), ""), GraphFormat::Json);
        assert_eq!(GraphFormat::detect(None, "c hi\np edge 1 0\n"), GraphFormat::Dimacs);
        assert_eq!(GraphFormat::detect(None, "# x\n0 1\n"), GraphFormat::EdgeList);
        assert_eq!(GraphFormat::detect(None, "  {\"n\":1}"), GraphFormat::Json);
    }
}
