//! Adjacency-matrix text format and DOT export.
//!
//! Row `i`, column `j` holds `1` when there is an edge `{i, j}` (then the
//! matrix is symmetric at that position) or an arc `(i, j)` with no reverse
//! entry. Rows are newline separated; entries are either whitespace separated
//! tokens or a contiguous run of digits.

use std::fmt::Write as _;

use thiserror::Error;

use crate::graph::MixedGraph;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("row {row} has {len} entries, expected {expected}")]
    NonSquare {
        row: usize,
        len: usize,
        expected: usize,
    },
    #[error("line {line}: bad token {token:?} (expected 0 or 1)")]
    BadToken { line: usize, token: String },
    #[error("nonzero diagonal entry at vertex {0}")]
    NonzeroDiagonal(usize),
}

/// A parsed matrix plus any leading non-matrix lines that were set aside.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatrixFile {
    pub graph: MixedGraph,
    pub header: Vec<String>,
}

fn parse_row(line: &str, lineno: usize) -> Result<Vec<bool>, ParseError> {
    let bad = |token: &str| ParseError::BadToken {
        line: lineno,
        token: token.to_string(),
    };
    if line.split_whitespace().nth(1).is_some() {
        line.split_whitespace()
            .map(|t| match t {
                "0" => Ok(false),
                "1" => Ok(true),
                _ => Err(bad(t)),
            })
            .collect()
    } else {
        line.chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(bad(&c.to_string())),
            })
            .collect()
    }
}

fn matrix_to_graph(rows: Vec<Vec<bool>>) -> Result<MixedGraph, ParseError> {
    let n = rows.len();
    for (i, row) in rows.iter().enumerate() {
        if row.len() != n {
            return Err(ParseError::NonSquare {
                row: i,
                len: row.len(),
                expected: n,
            });
        }
        if row[i] {
            return Err(ParseError::NonzeroDiagonal(i));
        }
    }
    let mut edges = Vec::new();
    let mut arcs = Vec::new();
    for (i, row) in rows.iter().enumerate() {
        for (j, &set) in row.iter().enumerate() {
            if !set {
                continue;
            }
            if rows[j][i] {
                if i < j {
                    edges.push((i, j));
                }
            } else {
                arcs.push((i, j));
            }
        }
    }
    Ok(MixedGraph::new(n, edges, arcs).expect("matrix entries are distinct and in range"))
}

/// Strict parser: every non-blank line must be a matrix row.
pub fn read_adjacency_matrix(text: &str) -> Result<MixedGraph, ParseError> {
    let rows = text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(k, l)| parse_row(l.trim(), k + 1))
        .collect::<Result<Vec<_>, _>>()?;
    matrix_to_graph(rows)
}

/// Like [`read_adjacency_matrix`], but leading lines that do not parse as a
/// 0/1 row (an order count, a title) are returned in `header` instead of
/// failing. Anything unparseable after the first row is still an error.
pub fn read_adjacency_matrix_with_header(text: &str) -> Result<MatrixFile, ParseError> {
    let mut header = Vec::new();
    let mut rows: Vec<(String, Vec<bool>)> = Vec::new();
    for (k, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        match parse_row(line, k + 1) {
            Ok(row) => rows.push((line.to_string(), row)),
            Err(_) if rows.is_empty() => header.push(line.to_string()),
            Err(e) => return Err(e),
        }
    }
    // A count line such as "10" also reads as a digit row; it is a header
    // when dropping it leaves a square matrix.
    if rows.len() > 1 && rows[0].1.len() != rows.len() && rows[1].1.len() == rows.len() - 1 {
        header.push(rows.remove(0).0);
    }
    let rows = rows.into_iter().map(|(_, r)| r).collect();
    Ok(MatrixFile {
        graph: matrix_to_graph(rows)?,
        header,
    })
}

/// Space-separated rows joined by `\n`, no trailing newline.
///
/// A matrix cannot express 2-cycles: an arc beside an edge, or two
/// antiparallel arcs, reads back as a single edge.
pub fn write_adjacency_matrix(g: &MixedGraph) -> String {
    let n = g.order();
    let mut m = vec![vec![b'0'; n]; n];
    for &(u, v) in g.edges() {
        m[u][v] = b'1';
        m[v][u] = b'1';
    }
    for &(u, v) in g.arcs() {
        m[u][v] = b'1';
    }
    m.iter()
        .map(|row| {
            row.iter()
                .map(|&b| (b as char).to_string())
                .collect::<Vec<_>>()
                .join(" ")
        })
        .collect::<Vec<_>>()
        .join("\n")
}

/// Graphviz `digraph`. Arcs are plain directed statements; edges carry
/// `dir=none`. Nodes, then arcs, then edges, each in sorted order.
pub fn export_dot(g: &MixedGraph) -> String {
    let mut s = String::from("digraph mixed {\n");
    for v in 0..g.order() {
        let _ = writeln!(s, "  {v};");
    }
    for &(u, v) in g.arcs() {
        let _ = writeln!(s, "  {u} -> {v};");
    }
    for &(u, v) in g.edges() {
        let _ = writeln!(s, "  {u} -> {v} [dir=none];");
    }
    s.push_str("}\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symmetric_entry_is_edge() {
        let g = read_adjacency_matrix("0 1\n1 0").unwrap();
        assert_eq!(g.edges(), &[(0, 1)]);
        assert!(g.arcs().is_empty());
    }

    #[test]
    fn asymmetric_entry_is_arc() {
        let g = read_adjacency_matrix("0 1\n0 0").unwrap();
        assert_eq!(g.arcs(), &[(0, 1)]);
        assert!(g.edges().is_empty());
    }

    #[test]
    fn contiguous_layout() {
        let a = read_adjacency_matrix("011\n000\n100\n").unwrap();
        let b = read_adjacency_matrix("0 1 1\n0 0 0\n1 0 0").unwrap();
        assert_eq!(a, b);
        assert_eq!(a.edges(), &[(0, 2)]);
        assert_eq!(a.arcs(), &[(0, 1)]);
    }

    #[test]
    fn parse_errors() {
        assert_eq!(
            read_adjacency_matrix("0 1\n1 0 0"),
            Err(ParseError::NonSquare {
                row: 1,
                len: 3,
                expected: 2
            })
        );
        assert_eq!(
            read_adjacency_matrix("0 2\n1 0"),
            Err(ParseError::BadToken {
                line: 1,
                token: "2".into()
            })
        );
        assert_eq!(
            read_adjacency_matrix("1 0\n0 0"),
            Err(ParseError::NonzeroDiagonal(0))
        );
    }

    #[test]
    fn header_lines_are_reported() {
        let f = read_adjacency_matrix_with_header("order 2\n2\n0 1\n1 0\n").unwrap();
        assert_eq!(f.header, vec!["order 2".to_string(), "2".to_string()]);
        assert_eq!(f.graph.edges(), &[(0, 1)]);
        assert!(read_adjacency_matrix_with_header("0 1\nx\n").is_err());
        let f = read_adjacency_matrix_with_header("10\n0 1\n1 0\n").unwrap();
        assert_eq!(f.header, vec!["10".to_string()]);
    }

    #[test]
    fn writes_exact_text() {
        let e = MixedGraph::new(2, [(0, 1)], []).unwrap();
        assert_eq!(write_adjacency_matrix(&e), "0 1\n1 0");
        let a = MixedGraph::new(2, [], [(0, 1)]).unwrap();
        assert_eq!(write_adjacency_matrix(&a), "0 1\n0 0");
    }

    #[test]
    fn dot_output() {
        assert_eq!(export_dot(&MixedGraph::empty(0)), "digraph mixed {\n}\n");
        let a = MixedGraph::new(2, [], [(1, 0)]).unwrap();
        assert_eq!(
            export_dot(&a),
            "digraph mixed {\n  0;\n  1;\n  1 -> 0;\n}\n"
        );
    }
}
