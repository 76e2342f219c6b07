//! Text instance format.
//!
//! ```text
//! c optional comment
//! p pcover <n> <m>
//! e <u> <v>          (m lines, 1-indexed)
//! w <v> <0|1>        (optional, default weight 1)
//! ```

use std::fmt::Write as _;

use thiserror::Error;

use crate::graph::{Graph, GraphError, Weights};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("line {line}: {message}")]
    Line { line: usize, message: String },
    #[error("missing `p pcover <n> <m>` header")]
    NoHeader,
    #[error("header declares {declared} edges, found {found}")]
    EdgeCount { declared: usize, found: usize },
}

fn at(line: usize, message: impl Into<String>) -> ParseError {
    ParseError::Line {
        line,
        message: message.into(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    pub graph: Graph,
    pub weights: Weights,
}

fn number(tok: Option<&str>, line: usize, what: &str) -> Result<usize, ParseError> {
    let tok = tok.ok_or_else(|| at(line, format!("missing {what}")))?;
    tok.parse()
        .map_err(|_| at(line, format!("{what} `{tok}` is not a nonnegative integer")))
}

fn vertex(tok: Option<&str>, line: usize, n: usize) -> Result<usize, ParseError> {
    let v = number(tok, line, "vertex")?;
    if v == 0 || v > n {
        return Err(at(line, format!("vertex {v} outside 1..={n}")));
    }
    Ok(v - 1)
}

pub fn parse(text: &str) -> Result<Instance, ParseError> {
    let mut header: Option<(usize, usize)> = None;
    let mut edges = Vec::new();
    let mut weights: Vec<u8> = Vec::new();
    let mut edge_lines = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let mut toks = raw.split_whitespace();
        let Some(tag) = toks.next() else { continue };
        match tag {
            "c" => continue,
            "p" => {
                if header.is_some() {
                    return Err(at(line, "second header"));
                }
                if toks.next() != Some("pcover") {
                    return Err(at(line, "expected `p pcover <n> <m>`"));
                }
                let n = number(toks.next(), line, "vertex count")?;
                let m = number(toks.next(), line, "edge count")?;
                header = Some((n, m));
                weights = vec![1; n];
            }
            "e" => {
                let (n, _) = header.ok_or_else(|| at(line, "edge before header"))?;
                let u = vertex(toks.next(), line, n)?;
                let v = vertex(toks.next(), line, n)?;
                edges.push((u, v));
                edge_lines.push(line);
            }
            "w" => {
                let (n, _) = header.ok_or_else(|| at(line, "weight before header"))?;
                let v = vertex(toks.next(), line, n)?;
                weights[v] = match toks.next() {
                    Some("0") => 0,
                    Some("1") => 1,
                    other => {
                        let got = other.unwrap_or("nothing");
                        return Err(at(line, format!("weight must be 0 or 1, got `{got}`")));
                    }
                };
            }
            other => return Err(at(line, format!("unknown line type `{other}`"))),
        }
        if let Some(extra) = toks.next() {
            return Err(at(line, format!("unexpected token `{extra}`")));
        }
    }
    let (n, m) = header.ok_or(ParseError::NoHeader)?;
    if edges.len() != m {
        return Err(ParseError::EdgeCount {
            declared: m,
            found: edges.len(),
        });
    }
    let graph = Graph::from_edges(n, edges.iter().copied()).map_err(|e| {
        let (bad, what) = match e {
            GraphError::SelfLoop(v) => (
                edges.iter().position(|&(a, b)| a == v && b == v),
                "self loop",
            ),
            GraphError::DuplicateEdge(u, v) => (
                edges
                    .iter()
                    .enumerate()
                    .filter(|&(_, &(a, b))| (a, b) == (u, v) || (a, b) == (v, u))
                    .nth(1)
                    .map(|(i, _)| i),
                "duplicate edge",
            ),
            _ => (None, "invalid edge"),
        };
        at(bad.map_or(0, |i| edge_lines[i]), what)
    })?;
    Ok(Instance {
        graph,
        weights: Weights::new(weights).expect("weights are 0 or 1"),
    })
}

/// Canonical text: sorted edges, weight lines only for zero weights.
pub fn serialize(inst: &Instance) -> String {
    let g = &inst.graph;
    let mut out = format!("p pcover {} {}\n", g.vertex_count(), g.edge_count());
    for (u, v) in g.edges() {
        writeln!(out, "e {} {}", u + 1, v + 1).unwrap();
    }
    for v in g.vertices() {
        if inst.weights.get(v) == 0 {
            writeln!(out, "w {} 0", v + 1).unwrap();
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_round_trips() {
        let text = "c path\np pcover 3 2\n\ne 1 2\ne 3 2\nw 2 0\n";
        let inst = parse(text).unwrap();
        assert_eq!(inst.graph.edge_count(), 2);
        assert!(inst.graph.has_edge(1, 2));
        assert_eq!(inst.weights.as_slice(), &[1, 0, 1]);
        let canon = serialize(&inst);
        assert_eq!(canon, "p pcover 3 2\ne 1 2\ne 2 3\nw 2 0\n");
        assert_eq!(parse(&canon).unwrap(), inst);
    }

    #[test]
    fn reports_lines() {
        let err = |t: &str| parse(t).unwrap_err().to_string();
        assert_eq!(
            err("p pcover 2 1\ne 1 3\n"),
            "line 2: vertex 3 outside 1..=2"
        );
        assert_eq!(
            err("p pcover 2 2\ne 1 2\ne 2 1\n"),
            "line 3: duplicate edge"
        );
        assert_eq!(err("p pcover 2 1\ne 1 1\n"), "line 2: self loop");
        assert_eq!(
            err("p pcover 2 2\ne 1 2\n"),
            "header declares 2 edges, found 1"
        );
        assert_eq!(err("e 1 2\n"), "line 1: edge before header");
        assert_eq!(
            err("p pcover 2 0\nw 1 2\n"),
            "line 2: weight must be 0 or 1, got `2`"
        );
        assert_eq!(err("c nothing\n"), "missing `p pcover <n> <m>` header");
        assert_eq!(err("p pcover 2 0\nx\n"), "line 2: unknown line type `x`");
    }
}
