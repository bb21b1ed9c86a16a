//! Text formats for colorings.
//!
//! * Adjacency list: line `v` is `"v: u1 u2 ..."` listing the Color One
//!   neighbors of `v`; every unlisted pair is Color Two.
//! * Lower triangle: row `r` (for vertices `1..n`) holds `r` characters, the
//!   `c`-th encoding edge `(c, r)` as `1`, `0` or `?`.
//!
//! Both are UTF-8 with LF line endings; emitters always terminate lines.

use super::{Color, EdgeColoring, GraphError, MAX_VERTICES};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

/// Which of the two text formats a coloring is written in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TextFormat {
    /// Adjacency list.
    Adj,
    /// Lower triangle.
    Tri,
}

impl TextFormat {
    /// Adjacency lists label every line with `v:`; triangle rows never
    /// contain a colon.
    pub fn detect(text: &str) -> TextFormat {
        if text.contains(':') {
            TextFormat::Adj
        } else {
            TextFormat::Tri
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            TextFormat::Adj => "adj",
            TextFormat::Tri => "tri",
        }
    }
}

impl fmt::Display for TextFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TextFormat {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "adj" => Ok(TextFormat::Adj),
            "tri" => Ok(TextFormat::Tri),
            other => Err(format!("unknown format {other:?}, expected adj or tri")),
        }
    }
}

/// Parses `text` in `format`, or in the detected format when `None`.
pub fn parse_coloring(text: &str, format: Option<TextFormat>) -> Result<EdgeColoring, ParseError> {
    match format.unwrap_or_else(|| TextFormat::detect(text)) {
        TextFormat::Adj => parse_adjacency_list(text),
        TextFormat::Tri => parse_triangle_matrix(text),
    }
}

/// Writes `coloring` in `format`; adjacency lists need a total coloring.
pub fn emit_coloring(coloring: &EdgeColoring, format: TextFormat) -> Result<String, GraphError> {
    match format {
        TextFormat::Adj => emit_adjacency_list(coloring),
        TextFormat::Tri => Ok(emit_triangle_matrix(coloring)),
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("line {line}: {message}")]
pub struct ParseError {
    /// 1-based line number of the offending input line.
    pub line: usize,
    pub message: String,
}

impl ParseError {
    fn new(line: usize, message: impl Into<String>) -> Self {
        ParseError { line, message: message.into() }
    }
}

fn content_lines(text: &str) -> Vec<&str> {
    let mut lines: Vec<&str> = text.split('\n').collect();
    if lines.last() == Some(&"") {
        lines.pop();
    }
    lines
        .into_iter()
        .map(|l| l.strip_suffix('\r').unwrap_or(l))
        .collect()
}

/// Parses an adjacency list of the Color One graph.
///
/// Input must be symmetric: if `u` is listed on line `v`, `v` must be listed
/// on line `u`.
pub fn parse_adjacency_list(text: &str) -> Result<EdgeColoring, ParseError> {
    let lines = content_lines(text);
    let n = lines.len();
    if n > MAX_VERTICES {
        return Err(ParseError::new(MAX_VERTICES + 1, format!("more than {MAX_VERTICES} vertices")));
    }
    let mut lists: Vec<Vec<usize>> = Vec::with_capacity(n);
    for (v, raw) in lines.iter().enumerate() {
        let line = v + 1;
        let (head, rest) = raw
            .split_once(':')
            .ok_or_else(|| ParseError::new(line, "expected \"<vertex>: <neighbors>\""))?;
        let label: usize = head
            .trim()
            .parse()
            .map_err(|_| ParseError::new(line, format!("bad vertex label {:?}", head.trim())))?;
        if label != v {
            return Err(ParseError::new(line, format!("expected vertex {v}, found {label}")));
        }
        let mut seen = Vec::new();
        for tok in rest.split_whitespace() {
            let u: usize = tok
                .parse()
                .map_err(|_| ParseError::new(line, format!("bad neighbor {tok:?}")))?;
            if u == v {
                return Err(ParseError::new(line, format!("self-loop at vertex {v}")));
            }
            if u >= n {
                return Err(ParseError::new(line, format!("neighbor {u} out of range 0..{n}")));
            }
            if seen.contains(&u) {
                return Err(ParseError::new(line, format!("duplicate neighbor {u}")));
            }
            seen.push(u);
        }
        lists.push(seen);
    }

    let mut coloring = EdgeColoring::uniform(n, Color::Two).expect("size checked");
    for (v, list) in lists.iter().enumerate() {
        for &u in list {
            if !lists[u].contains(&v) {
                return Err(ParseError::new(
                    u + 1,
                    format!("vertex {u} does not list {v}, but {v} lists {u}"),
                ));
            }
            coloring.set(u, v, Some(Color::One));
        }
    }
    Ok(coloring)
}

/// Emits the canonical adjacency list (sorted neighbors, `"v:"` for none).
pub fn emit_adjacency_list(coloring: &EdgeColoring) -> Result<String, GraphError> {
    coloring.require_total()?;
    let mut out = String::new();
    for v in 0..coloring.n() {
        out.push_str(&v.to_string());
        out.push(':');
        for u in coloring.neighbors(v, Color::One).iter() {
            out.push(' ');
            out.push_str(&u.to_string());
        }
        out.push('\n');
    }
    Ok(out)
}

/// Parses the lower-triangle format; an empty document is `K_1`.
pub fn parse_triangle_matrix(text: &str) -> Result<EdgeColoring, ParseError> {
    let lines = content_lines(text);
    let n = lines.len() + 1;
    if n > MAX_VERTICES {
        return Err(ParseError::new(MAX_VERTICES, format!("more than {MAX_VERTICES} vertices")));
    }
    let mut coloring = EdgeColoring::undecided(n).expect("size checked");
    for (idx, raw) in lines.iter().enumerate() {
        let row = idx + 1;
        let width = raw.chars().count();
        if width != row {
            return Err(ParseError::new(row, format!("row {row} has {width} cells, expected {row}")));
        }
        for (col, ch) in raw.chars().enumerate() {
            let state = match ch {
                '1' => Some(Color::One),
                '0' => Some(Color::Two),
                '?' => None,
                other => {
                    return Err(ParseError::new(row, format!("bad cell {other:?} in column {col}")))
                }
            };
            coloring.set(col, row, state);
        }
    }
    Ok(coloring)
}

/// Emits the lower-triangle format; undecided edges become `?`.
pub fn emit_triangle_matrix(coloring: &EdgeColoring) -> String {
    let n = coloring.n();
    let mut out = String::with_capacity(n * n / 2 + n);
    for row in 1..n {
        for col in 0..row {
            out.push(match coloring.get(col, row) {
                Some(Color::One) => '1',
                Some(Color::Two) => '0',
                None => '?',
            });
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::ZVector;

    #[test]
    fn single_edge_list() {
        let c = parse_adjacency_list("0: 1\n1: 0\n").unwrap();
        assert_eq!(c, EdgeColoring::uniform(2, Color::One).unwrap());
    }

    #[test]
    fn asymmetric_list_is_rejected() {
        let err = parse_adjacency_list("0: 1\n1:\n").unwrap_err();
        assert_eq!(err.line, 2);
        assert!(err.message.contains("does not list"));
    }

    #[test]
    fn list_errors_name_the_line() {
        assert_eq!(parse_adjacency_list("0: 0\n").unwrap_err().line, 1);
        assert_eq!(parse_adjacency_list("0: 1\n1: 0 2\n").unwrap_err().line, 2);
        assert_eq!(parse_adjacency_list("0: 1 1\n1: 0\n").unwrap_err().line, 1);
        assert_eq!(parse_adjacency_list("0: 1\n2: 0\n").unwrap_err().line, 2);
        assert_eq!(parse_adjacency_list("0 1\n").unwrap_err().line, 1);
        assert_eq!(parse_adjacency_list("0: x\n").unwrap_err().line, 1);
    }

    #[test]
    fn empty_lists_emit_bare_labels() {
        let c = EdgeColoring::uniform(3, Color::Two).unwrap();
        assert_eq!(emit_adjacency_list(&c).unwrap(), "0:\n1:\n2:\n");
    }

    #[test]
    fn five_cycle_lists() {
        let c = ZVector::from_bits(&[true, false, false, true]).to_coloring().unwrap();
        assert_eq!(emit_adjacency_list(&c).unwrap(), "0: 1 4\n1: 0 2\n2: 1 3\n3: 2 4\n4: 0 3\n");
    }

    #[test]
    fn emit_requires_total() {
        let c = EdgeColoring::undecided(3).unwrap();
        assert_eq!(emit_adjacency_list(&c), Err(GraphError::Incomplete { count: 3 }));
    }

    #[test]
    fn triangle_decode() {
        let c = parse_triangle_matrix("0\n11\n").unwrap();
        assert_eq!(c.n(), 3);
        assert_eq!(c.get(0, 1), Some(Color::Two));
        assert_eq!(c.get(0, 2), Some(Color::One));
        assert_eq!(c.get(1, 2), Some(Color::One));
        assert_eq!(emit_triangle_matrix(&c), "0\n11\n");
    }

    #[test]
    fn triangle_keeps_undecided() {
        let text = "?\n1?\n0?1\n";
        let c = parse_triangle_matrix(text).unwrap();
        assert_eq!(c.undecided_count(), 3);
        assert_eq!(emit_triangle_matrix(&c), text);
    }

    #[test]
    fn triangle_errors() {
        assert_eq!(parse_triangle_matrix("0\n1\n").unwrap_err().line, 2);
        assert_eq!(parse_triangle_matrix("0\n1x\n").unwrap_err().line, 2);
        assert_eq!(parse_triangle_matrix("").unwrap().n(), 1);
    }
}
