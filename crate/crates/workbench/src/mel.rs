//! MEL, a line-oriented multigraph edge list.
//!
//! ```text
//! # theta
//! v 7
//! e 1 0 1
//! e 2 0 1
//! e 3 1 0
//! ```

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::Path;

use cdc_core::{GraphError, MultiGraph};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum MelError {
    #[error("line {line}: unknown record `{word}`")]
    UnknownRecord { line: usize, word: String },
    #[error("line {line}: expected {expected} fields after `{kind}`, found {found}")]
    Arity { line: usize, kind: char, expected: usize, found: usize },
    #[error("line {line}: `{text}` is not a decimal id")]
    BadId { line: usize, text: String },
    #[error("line {line}: vertex {id} listed twice")]
    DuplicateVertex { line: usize, id: u32 },
    #[error("line {line}: edge {id} listed twice")]
    DuplicateEdge { line: usize, id: u32 },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
}

fn id(line: usize, text: &str) -> Result<u32, MelError> {
    if text.is_empty() || !text.bytes().all(|b| b.is_ascii_digit()) {
        return Err(MelError::BadId { line, text: text.into() });
    }
    text.parse().map_err(|_| MelError::BadId { line, text: text.into() })
}

pub fn parse(text: &str) -> Result<MultiGraph, MelError> {
    let mut vertices = BTreeSet::new();
    let mut listed = BTreeSet::new();
    let mut edge_ids = BTreeSet::new();
    let mut edges = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let mut fields = raw.split_whitespace();
        let Some(kind) = fields.next() else { continue };
        if kind.starts_with('#') {
            continue;
        }
        let rest: Vec<&str> = fields.collect();
        match kind {
            "v" => {
                if rest.len() != 1 {
                    return Err(MelError::Arity { line, kind: 'v', expected: 1, found: rest.len() });
                }
                let v = id(line, rest[0])?;
                if !listed.insert(v) {
                    return Err(MelError::DuplicateVertex { line, id: v });
                }
                vertices.insert(v);
            }
            "e" => {
                if rest.len() != 3 {
                    return Err(MelError::Arity { line, kind: 'e', expected: 3, found: rest.len() });
                }
                let (e, u, v) = (id(line, rest[0])?, id(line, rest[1])?, id(line, rest[2])?);
                if !edge_ids.insert(e) {
                    return Err(MelError::DuplicateEdge { line, id: e });
                }
                vertices.insert(u);
                vertices.insert(v);
                edges.push((e, u, v));
            }
            word => return Err(MelError::UnknownRecord { line, word: word.into() }),
        }
    }
    let vertices: Vec<u32> = vertices.into_iter().collect();
    Ok(MultiGraph::from_parts(&vertices, &edges)?)
}

/// Canonical text: isolated vertices, then edges by id with `u <= v`.
pub fn write(g: &MultiGraph) -> String {
    let mut out = String::new();
    for &v in g.vertices() {
        if g.degree(v) == 0 {
            writeln!(out, "v {v}").unwrap();
        }
    }
    for (e, u, v) in g.edge_triples() {
        writeln!(out, "e {e} {u} {v}").unwrap();
    }
    out
}

pub fn read_file(path: &Path) -> Result<MultiGraph, MelError> {
    let text = std::fs::read_to_string(path).map_err(|source| MelError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse(&text)
}
