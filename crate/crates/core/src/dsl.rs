//! Line-oriented text format for labeled graphs (`.gbs` files).
//!
//! ```text
//! # trefoil group
//! vertex a
//! edge e1 a 2 b 3
//! ```
//!
//! `vertex <id>` declares a vertex, `edge <id> <v0> <label0> <v1> <label1>`
//! declares an edge (a loop when `v0 = v1`). Vertices may be declared
//! implicitly by an edge line. Labels are arbitrary-precision nonzero
//! integers. Lines starting with `#` are comments.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::Zero;
use thiserror::Error;

use crate::graph::{GraphError, LabeledGraph, RawEdge};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{col}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

impl ParseError {
    fn at(pos: Pos, message: impl Into<String>) -> Self {
        ParseError {
            line: pos.line,
            col: pos.col,
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Pos {
    line: usize,
    col: usize,
}

struct Token<'a> {
    text: &'a str,
    pos: Pos,
}

fn tokenize(line: &str, line_no: usize) -> Vec<Token<'_>> {
    let mut out = Vec::new();
    let mut start: Option<(usize, usize)> = None;
    let mut col = 0usize;
    for (byte, ch) in line.char_indices() {
        col += 1;
        if ch.is_whitespace() {
            if let Some((b, c)) = start.take() {
                out.push(Token {
                    text: &line[b..byte],
                    pos: Pos { line: line_no, col: c },
                });
            }
        } else if start.is_none() {
            start = Some((byte, col));
        }
    }
    if let Some((b, c)) = start {
        out.push(Token {
            text: &line[b..],
            pos: Pos { line: line_no, col: c },
        });
    }
    out
}

fn check_id(tok: &Token<'_>) -> Result<String, ParseError> {
    if tok.text.contains('^') || tok.text.contains('#') {
        return Err(ParseError::at(
            tok.pos,
            format!("identifier `{}` may not contain `^` or `#`", tok.text),
        ));
    }
    Ok(tok.text.to_string())
}

fn label(tok: &Token<'_>) -> Result<BigInt, ParseError> {
    let v = BigInt::from_str(tok.text)
        .map_err(|_| ParseError::at(tok.pos, format!("expected an integer label, found `{}`", tok.text)))?;
    if v.is_zero() {
        return Err(ParseError::at(tok.pos, "zero label: labels must be nonzero integers"));
    }
    Ok(v)
}

/// Parses graph text, reporting syntax and validation errors with positions.
pub fn parse(text: &str) -> Result<LabeledGraph, ParseError> {
    let mut vertices = Vec::new();
    let mut edges = Vec::new();
    // first mention of every id, for positioned validation errors
    let mut vertex_pos: BTreeMap<String, Pos> = BTreeMap::new();
    let mut edge_pos: BTreeMap<String, Pos> = BTreeMap::new();

    for (i, line) in text.lines().enumerate() {
        let tokens = tokenize(line, i + 1);
        let Some(head) = tokens.first() else { continue };
        if head.text.starts_with('#') {
            continue;
        }
        match head.text {
            "vertex" => {
                if tokens.len() != 2 {
                    return Err(ParseError::at(head.pos, "expected `vertex <id>`"));
                }
                let id = check_id(&tokens[1])?;
                if vertices.contains(&id) {
                    return Err(ParseError::at(tokens[1].pos, format!("duplicate vertex `{id}`")));
                }
                vertex_pos.entry(id.clone()).or_insert(tokens[1].pos);
                vertices.push(id);
            }
            "edge" => {
                if tokens.len() != 6 {
                    return Err(ParseError::at(
                        head.pos,
                        "expected `edge <id> <v0> <label0> <v1> <label1>`",
                    ));
                }
                let id = check_id(&tokens[1])?;
                if edge_pos.contains_key(&id) {
                    return Err(ParseError::at(tokens[1].pos, format!("duplicate edge `{id}`")));
                }
                edge_pos.insert(id.clone(), tokens[1].pos);
                let v0 = check_id(&tokens[2])?;
                let l0 = label(&tokens[3])?;
                let v1 = check_id(&tokens[4])?;
                let l1 = label(&tokens[5])?;
                vertex_pos.entry(v0.clone()).or_insert(tokens[2].pos);
                vertex_pos.entry(v1.clone()).or_insert(tokens[4].pos);
                edges.push(RawEdge {
                    id,
                    ends: [v0, v1],
                    labels: [l0, l1],
                });
            }
            other => {
                return Err(ParseError::at(
                    head.pos,
                    format!("unknown directive `{other}` (expected `vertex` or `edge`)"),
                ));
            }
        }
    }

    LabeledGraph::new(vertices, edges).map_err(|e| {
        let pos = match &e {
            GraphError::Empty => Pos { line: 1, col: 1 },
            GraphError::Disconnected { vertex, .. } => vertex_pos[vertex],
            GraphError::DuplicateId(id) => edge_pos.get(id).or(vertex_pos.get(id)).copied().unwrap_or(Pos { line: 1, col: 1 }),
            GraphError::ZeroLabel { edge, .. } | GraphError::UnknownVertex { edge, .. } => edge_pos[edge],
            GraphError::NotReduced(edge) => edge_pos[edge],
        };
        ParseError::at(pos, e.to_string())
    })
}

/// Reads and parses a `.gbs` file.
pub fn parse_file(path: &std::path::Path) -> Result<LabeledGraph, ParseError> {
    let text = std::fs::read_to_string(path).map_err(|e| ParseError {
        line: 0,
        col: 0,
        message: format!("cannot read {}: {e}", path.display()),
    })?;
    parse(&text)
}

/// Writes a graph in the text format: every vertex declared, then every
/// edge, both in id order. `parse(serialize(g)) == g`.
pub fn serialize(g: &LabeledGraph) -> String {
    let mut out = String::new();
    for v in g.vertices() {
        let _ = writeln!(out, "vertex {v}");
    }
    for e in g.raw_edges() {
        let _ = writeln!(
            out,
            "edge {} {} {} {} {}",
            e.id, e.ends[0], e.labels[0], e.ends[1], e.labels[1]
        );
    }
    out
}
