//! Edge-list text format.
//!
//! ```text
//! n e
//! u v      (e lines, 0 <= u < v < n, lexicographically sorted)
//! ```
//!
//! The writer always emits this canonical form. The reader also accepts
//! unsorted lines and `u > v`, but rejects loops, repeated edges, indices out
//! of range and a wrong edge count.

use std::collections::HashSet;
use std::fmt::Write as _;

use super::Graph;
use crate::error::{Error, Result};

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

/// Parses two whitespace-separated unsigned integers.
pub(crate) fn parse_pair(line_no: usize, line: &str) -> Result<(usize, usize)> {
    let mut it = line.split_whitespace();
    let mut next = || -> Result<usize> {
        let tok = it
            .next()
            .ok_or_else(|| parse_err(line_no, "expected two integers"))?;
        tok.parse()
            .map_err(|_| parse_err(line_no, format!("invalid integer {tok:?}")))
    };
    let pair = (next()?, next()?);
    if it.next().is_some() {
        return Err(parse_err(line_no, "trailing tokens"));
    }
    Ok(pair)
}

pub fn read_edge_list(text: &str) -> Result<Graph> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty());
    let (hl, header) = lines.next().ok_or_else(|| parse_err(1, "missing header"))?;
    let (n, e) = parse_pair(hl, header)?;
    let mut seen = HashSet::with_capacity(e);
    let mut edges = Vec::with_capacity(e);
    let mut last_line = hl;
    for (ln, line) in lines {
        last_line = ln;
        let (u, v) = parse_pair(ln, line)?;
        if u >= n || v >= n {
            return Err(parse_err(
                ln,
                format!("vertex index {} out of range 0..{n}", u.max(v)),
            ));
        }
        if u == v {
            return Err(parse_err(ln, format!("loop at vertex {u}")));
        }
        let key = (u.min(v), u.max(v));
        if !seen.insert(key) {
            return Err(parse_err(ln, format!("duplicate edge {{{}, {}}}", key.0, key.1)));
        }
        edges.push(key);
    }
    if edges.len() != e {
        return Err(parse_err(
            last_line,
            format!("header declares {e} edges, found {}", edges.len()),
        ));
    }
    Graph::from_edges(n, edges)
}

pub fn write_edge_list(g: &Graph) -> String {
    let mut out = String::new();
    writeln!(out, "{} {}", g.n(), g.num_edges()).unwrap();
    for (u, v) in g.edges() {
        writeln!(out, "{u} {v}").unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::complete;

    #[test]
    fn reads_triangle() {
        let g = read_edge_list("3 3\n0 1\n1 2\n2 0").unwrap();
        assert_eq!(g, complete(3));
        assert_eq!(write_edge_list(&g), "3 3\n0 1\n0 2\n1 2\n");
    }

    #[test]
    fn canonical_round_trip() {
        let t = "4 3\n0 1\n0 3\n2 3\n";
        assert_eq!(write_edge_list(&read_edge_list(t).unwrap()), t);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let cases = [
            ("2 1\n0 2", 2),
            ("3 2\n0 1\n1 0", 3),
            ("3 1\n1 1", 2),
            ("3 1\n0 x", 2),
            ("3 2\n0 1", 2),
            ("", 1),
        ];
        for (text, line) in cases {
            match read_edge_list(text) {
                Err(Error::Parse { line: l, .. }) => assert_eq!(l, line, "{text:?}"),
                other => panic!("{text:?}: expected parse error, got {other:?}"),
            }
        }
    }
}
