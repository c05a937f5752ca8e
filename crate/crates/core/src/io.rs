//! Edge-list text format.
//!
//! ```text
//! # optional comments anywhere
//! n m
//! u v
//! ...
//! ```
//!
//! Endpoints are 0-based. Everything after a `#` on a line is ignored, and
//! blank lines are skipped.

use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::Path;

use thiserror::Error;

use crate::graph::{Graph, GraphError};

#[derive(Debug, Error)]
pub enum EdgeListError {
    #[error("i/o error: {0}")]
    Io(#[from] io::Error),
    #[error("line {line}: {message}")]
    Format { line: usize, message: String },
    #[error("header declares {declared} edges but {found} were listed")]
    EdgeCount { declared: usize, found: usize },
    #[error("missing `n m` header line")]
    MissingHeader,
    #[error("invalid graph: {0}")]
    Graph(#[from] GraphError),
}

fn format_err(line: usize, message: impl Into<String>) -> EdgeListError {
    EdgeListError::Format {
        line,
        message: message.into(),
    }
}

fn parse_pair(line_no: usize, body: &str) -> Result<(usize, usize), EdgeListError> {
    let mut parts = body.split_whitespace();
    let mut field = |what: &str| -> Result<usize, EdgeListError> {
        let tok = parts
            .next()
            .ok_or_else(|| format_err(line_no, format!("missing {what}")))?;
        tok.parse().map_err(|_| {
            format_err(
                line_no,
                format!("{what} `{tok}` is not a nonnegative integer"),
            )
        })
    };
    let a = field("first field")?;
    let b = field("second field")?;
    if parts.next().is_some() {
        return Err(format_err(line_no, "expected exactly two fields"));
    }
    Ok((a, b))
}

pub fn parse_edge_list(text: &str) -> Result<Graph, EdgeListError> {
    let mut header = None;
    let mut edges = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let pair = parse_pair(line_no, body)?;
        match header {
            None => header = Some(pair),
            Some(_) => edges.push((line_no, pair)),
        }
    }
    let (n, m) = header.ok_or(EdgeListError::MissingHeader)?;
    if edges.len() != m {
        return Err(EdgeListError::EdgeCount {
            declared: m,
            found: edges.len(),
        });
    }
    // Validate per line so errors carry a location.
    for &(line_no, (u, v)) in &edges {
        if u >= n || v >= n {
            return Err(format_err(line_no, format!("endpoint outside 0..{n}")));
        }
        if u == v {
            return Err(format_err(line_no, format!("self-loop at {u}")));
        }
    }
    let pairs: Vec<_> = edges.into_iter().map(|(_, p)| p).collect();
    Ok(Graph::new(n, &pairs)?)
}

pub fn format_edge_list(g: &Graph) -> String {
    let mut out = String::with_capacity(12 * (g.m() + 1));
    writeln!(out, "{} {}", g.n(), g.m()).unwrap();
    for &(u, v) in g.edges() {
        writeln!(out, "{u} {v}").unwrap();
    }
    out
}

pub fn read_edge_list(path: impl AsRef<Path>) -> Result<Graph, EdgeListError> {
    parse_edge_list(&fs::read_to_string(path)?)
}

pub fn write_edge_list(g: &Graph, path: impl AsRef<Path>) -> Result<(), EdgeListError> {
    fs::write(path, format_edge_list(g))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_with_comments() {
        let g = parse_edge_list("# a path\n3 2\n0 1 # first\n\n1 2\n").unwrap();
        assert_eq!(g.edges(), &[(0, 1), (1, 2)]);
    }

    #[test]
    fn format_is_header_then_edges() {
        let g = Graph::new(3, &[(2, 1), (0, 1)]).unwrap();
        assert_eq!(format_edge_list(&g), "3 2\n0 1\n1 2\n");
        assert_eq!(parse_edge_list(&format_edge_list(&g)).unwrap(), g);
    }

    #[test]
    fn reports_line_numbers() {
        match parse_edge_list("3 2\n0 1\n1 x\n") {
            Err(EdgeListError::Format { line, .. }) => assert_eq!(line, 3),
            other => panic!("unexpected {other:?}"),
        }
        match parse_edge_list("3 1\n0 5\n") {
            Err(EdgeListError::Format { line, .. }) => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn rejects_count_mismatch_and_duplicates() {
        assert!(matches!(
            parse_edge_list("3 2\n0 1\n"),
            Err(EdgeListError::EdgeCount {
                declared: 2,
                found: 1
            })
        ));
        assert!(matches!(
            parse_edge_list("3 2\n0 1\n1 0\n"),
            Err(EdgeListError::Graph(GraphError::DuplicateEdge(0, 1)))
        ));
        assert!(matches!(
            parse_edge_list("# nothing\n"),
            Err(EdgeListError::MissingHeader)
        ));
    }
}
