//! Walks `w0, e1, w1, …, ek, wk` and the operations on them.

use alloc::vec::Vec;

use thiserror::Error;

use crate::graph::{EdgeId, MultiGraph, VertexId};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WalkError {
    #[error("a walk needs exactly one more vertex than edges")]
    LengthMismatch,
    #[error("cannot join a walk ending at {end} with one starting at {start}")]
    EndpointMismatch { end: VertexId, start: VertexId },
    #[error("edge {edge} at position {position} does not join its neighbouring vertices")]
    NotIncident { position: usize, edge: EdgeId },
}

/// An alternating vertex/edge sequence.
///
/// Stored as the vertex list `w0, w2, …` and the edge list `w1, w3, …`;
/// `vertices.len() == edges.len() + 1` always holds.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Walk {
    vertices: Vec<VertexId>,
    edges: Vec<EdgeId>,
}

impl Walk {
    pub fn new(vertices: Vec<VertexId>, edges: Vec<EdgeId>) -> Result<Self, WalkError> {
        if vertices.len() != edges.len() + 1 {
            return Err(WalkError::LengthMismatch);
        }
        Ok(Self { vertices, edges })
    }

    /// The length-0 walk at `v`.
    pub fn trivial(v: VertexId) -> Self {
        Self {
            vertices: alloc::vec![v],
            edges: Vec::new(),
        }
    }

    /// Builds a walk from a raw alternating sequence `v, e, v, e, …, v`.
    pub fn from_sequence(seq: &[u32]) -> Result<Self, WalkError> {
        if seq.len() % 2 == 0 {
            return Err(WalkError::LengthMismatch);
        }
        let vertices = seq.iter().step_by(2).map(|&v| VertexId(v)).collect();
        let edges = seq.iter().skip(1).step_by(2).map(|&e| EdgeId(e)).collect();
        Self::new(vertices, edges)
    }

    /// Checks `r(w_{2i+1}) = {w_{2i}, w_{2i+2}}` against `host`.
    pub fn validate(&self, host: &MultiGraph) -> Result<(), WalkError> {
        for (i, &e) in self.edges.iter().enumerate() {
            let (a, b) = (self.vertices[i], self.vertices[i + 1]);
            let want = if a <= b { (a, b) } else { (b, a) };
            if host.endpoints(e) != Some(want) {
                return Err(WalkError::NotIncident {
                    position: 2 * i + 1,
                    edge: e,
                });
            }
        }
        if self.edges.is_empty() && !host.contains_vertex(self.vertices[0]) {
            return Err(WalkError::NotIncident {
                position: 0,
                edge: EdgeId(u32::MAX),
            });
        }
        Ok(())
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    pub fn edges(&self) -> &[EdgeId] {
        &self.edges
    }

    /// Number of edges `k`.
    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn start(&self) -> VertexId {
        self.vertices[0]
    }

    pub fn end(&self) -> VertexId {
        *self.vertices.last().unwrap()
    }

    pub fn is_closed(&self) -> bool {
        self.start() == self.end()
    }

    /// `w + w̄`, defined when `w` ends where `w̄` starts.
    pub fn concat(&self, other: &Walk) -> Result<Walk, WalkError> {
        if self.end() != other.start() {
            return Err(WalkError::EndpointMismatch {
                end: self.end(),
                start: other.start(),
            });
        }
        let mut vertices = self.vertices.clone();
        vertices.extend_from_slice(&other.vertices[1..]);
        let mut edges = self.edges.clone();
        edges.extend_from_slice(&other.edges);
        Ok(Walk { vertices, edges })
    }

    pub fn inverse(&self) -> Walk {
        let mut vertices = self.vertices.clone();
        vertices.reverse();
        let mut edges = self.edges.clone();
        edges.reverse();
        Walk { vertices, edges }
    }

    /// Left side with respect to `w_{2j}`: the prefix ending there.
    pub fn left_side(&self, j: usize) -> Walk {
        Walk {
            vertices: self.vertices[..=j].to_vec(),
            edges: self.edges[..j].to_vec(),
        }
    }

    /// Right side with respect to `w_{2j}`: the suffix starting there.
    pub fn right_side(&self, j: usize) -> Walk {
        Walk {
            vertices: self.vertices[j..].to_vec(),
            edges: self.edges[j..].to_vec(),
        }
    }

    /// The sub-walk from `w_{2i}` to `w_{2l}`.
    pub fn sub_walk(&self, i: usize, l: usize) -> Walk {
        Walk {
            vertices: self.vertices[i..=l].to_vec(),
            edges: self.edges[i..l].to_vec(),
        }
    }

    pub fn is_trail(&self) -> bool {
        let mut es = self.edges.clone();
        es.sort_unstable();
        es.windows(2).all(|w| w[0] != w[1])
    }

    /// A trail without repeated vertices.
    pub fn is_path(&self) -> bool {
        let mut vs = self.vertices.clone();
        vs.sort_unstable();
        self.is_trail() && vs.windows(2).all(|w| w[0] != w[1])
    }

    /// A closed trail repeating only its first vertex.
    pub fn is_cycle(&self) -> bool {
        if self.edges.is_empty() || !self.is_closed() || !self.is_trail() {
            return false;
        }
        let mut vs = self.vertices[..self.vertices.len() - 1].to_vec();
        vs.sort_unstable();
        vs.windows(2).all(|w| w[0] != w[1])
    }

    /// The body `G(w)`: the subgraph of visited vertices and edges.
    pub fn body(&self, host: &MultiGraph) -> MultiGraph {
        host.subgraph(self.vertices.iter().copied(), self.edges.iter().copied())
    }
}
