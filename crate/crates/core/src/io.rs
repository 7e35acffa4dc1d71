//! Text graph formats.
//!
//! Edge list: a header line `n m`, then exactly `m` lines `u v` with 0-based
//! ids. Blank lines and lines starting with `#` are ignored.
//!
//! DIMACS: `c` comment lines, one `p edge n m` (or `p col n m`) line, and
//! `e u v` lines with 1-based ids. The declared edge count is not enforced
//! since published instances often list edges in both directions.

use std::fmt::Write as _;

use thiserror::Error;

use crate::graph::{BuiltGraph, Graph, GraphError};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("missing header")]
    MissingHeader,
    #[error("header declares {declared} edges but {found} were listed")]
    EdgeCountMismatch { declared: usize, found: usize },
    #[error("line {line}: {source}")]
    Graph { line: usize, source: GraphError },
}

fn syntax(line: usize, message: impl Into<String>) -> ParseError {
    ParseError::Syntax {
        line,
        message: message.into(),
    }
}

fn parse_usize(tok: Option<&str>, line: usize, what: &str) -> Result<usize, ParseError> {
    let tok = tok.ok_or_else(|| syntax(line, format!("missing {what}")))?;
    tok.parse().map_err(|_| syntax(line, format!("invalid {what} '{tok}'")))
}

fn check_pair(u: usize, v: usize, n: usize, line: usize) -> Result<(), ParseError> {
    let err = |source| ParseError::Graph { line, source };
    if u >= n {
        return Err(err(GraphError::VertexOutOfRange { id: u, n }));
    }
    if v >= n {
        return Err(err(GraphError::VertexOutOfRange { id: v, n }));
    }
    if u == v {
        return Err(err(GraphError::SelfLoop(u)));
    }
    Ok(())
}

pub fn parse_edge_list(text: &str) -> Result<BuiltGraph, ParseError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (hline, header) = lines.next().ok_or(ParseError::MissingHeader)?;
    let mut toks = header.split_whitespace();
    let n = parse_usize(toks.next(), hline, "vertex count")?;
    let m = parse_usize(toks.next(), hline, "edge count")?;
    if toks.next().is_some() {
        return Err(syntax(hline, "trailing tokens in header"));
    }

    let mut edges = Vec::with_capacity(m.min(1 << 20));
    for (line, body) in lines {
        let mut toks = body.split_whitespace();
        let u = parse_usize(toks.next(), line, "endpoint")?;
        let v = parse_usize(toks.next(), line, "endpoint")?;
        if toks.next().is_some() {
            return Err(syntax(line, "trailing tokens"));
        }
        check_pair(u, v, n, line)?;
        edges.push((u, v));
    }
    if edges.len() != m {
        return Err(ParseError::EdgeCountMismatch {
            declared: m,
            found: edges.len(),
        });
    }
    Ok(Graph::build(n, &edges).expect("pairs validated"))
}

pub fn parse_dimacs(text: &str) -> Result<BuiltGraph, ParseError> {
    let mut n = None;
    let mut edges = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let body = raw.trim();
        let mut toks = body.split_whitespace();
        match toks.next() {
            None | Some("c") => {}
            Some("p") => {
                if n.is_some() {
                    return Err(syntax(line, "duplicate problem line"));
                }
                match toks.next() {
                    Some("edge") | Some("col") => {}
                    other => {
                        return Err(syntax(
                            line,
                            format!("unsupported problem type '{}'", other.unwrap_or("")),
                        ))
                    }
                }
                n = Some(parse_usize(toks.next(), line, "vertex count")?);
                parse_usize(toks.next(), line, "edge count")?;
            }
            Some("e") => {
                let n = n.ok_or_else(|| syntax(line, "edge before problem line"))?;
                let u = parse_usize(toks.next(), line, "endpoint")?;
                let v = parse_usize(toks.next(), line, "endpoint")?;
                if u == 0 || v == 0 {
                    return Err(syntax(line, "DIMACS vertex ids are 1-based"));
                }
                check_pair(u - 1, v - 1, n, line)?;
                edges.push((u - 1, v - 1));
            }
            Some(tag) => return Err(syntax(line, format!("unknown line tag '{tag}'"))),
        }
    }
    let n = n.ok_or(ParseError::MissingHeader)?;
    Ok(Graph::build(n, &edges).expect("pairs validated"))
}

pub fn write_edge_list(graph: &Graph) -> String {
    let mut out = String::new();
    writeln!(out, "{} {}", graph.vertex_count(), graph.edge_count()).unwrap();
    for (u, v) in graph.edges() {
        writeln!(out, "{u} {v}").unwrap();
    }
    out
}

pub fn write_dimacs(graph: &Graph) -> String {
    let mut out = String::new();
    writeln!(out, "p edge {} {}", graph.vertex_count(), graph.edge_count()).unwrap();
    for (u, v) in graph.edges() {
        writeln!(out, "e {} {}", u + 1, v + 1).unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn edge_list_with_comments() {
        let g = parse_edge_list("# path\n3 2\n0 1\n\n# mid\n1 2\n").unwrap();
        assert_eq!(g.graph.edge_count(), 2);
        assert_eq!(g.duplicate_edges, 0);
    }

    #[test]
    fn edge_list_duplicates_are_counted() {
        let g = parse_edge_list("3 2\n0 1\n1 0\n").unwrap();
        assert_eq!(g.graph.edge_count(), 1);
        assert_eq!(g.duplicate_edges, 1);
    }

    #[test]
    fn edge_list_errors() {
        assert_eq!(parse_edge_list("# only\n"), Err(ParseError::MissingHeader));
        assert!(matches!(
            parse_edge_list("3 1\n0 3\n"),
            Err(ParseError::Graph { line: 2, .. })
        ));
        assert!(matches!(
            parse_edge_list("3 1\n1 1\n"),
            Err(ParseError::Graph {
                source: GraphError::SelfLoop(1),
                ..
            })
        ));
        assert_eq!(
            parse_edge_list("3 2\n0 1\n"),
            Err(ParseError::EdgeCountMismatch { declared: 2, found: 1 })
        );
        assert!(matches!(
            parse_edge_list("3 1\n0 x\n"),
            Err(ParseError::Syntax { line: 2, .. })
        ));
    }

    #[test]
    fn dimacs_is_one_based() {
        let g = parse_dimacs("c tiny\np edge 3 2\ne 1 2\ne 2 3\n").unwrap().graph;
        assert!(g.has_edge(0, 1) && g.has_edge(1, 2));
        assert!(parse_dimacs("p edge 3 1\ne 0 1\n").is_err());
        assert!(parse_dimacs("e 1 2\n").is_err());
        assert_eq!(parse_dimacs("c nothing\n").unwrap_err(), ParseError::MissingHeader);
    }

    #[test]
    fn writers_roundtrip() {
        let g = Graph::from_edges(4, &[(0, 1), (2, 3), (1, 3)]);
        assert_eq!(parse_edge_list(&write_edge_list(&g)).unwrap().graph, g);
        assert_eq!(parse_dimacs(&write_dimacs(&g)).unwrap().graph, g);
    }
}
