//! Finite multigraphs as a vertex set, an edge set and an endpoint map.
//!
//! Loops (one endpoint) and parallel edges are allowed. A subgraph is just
//! another [`MultiGraph`] whose ids and endpoints agree with its host, so the
//! set algebra below works on arbitrary pairs of graphs.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use thiserror::Error;

/// Opaque vertex identifier.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId(pub u32);

/// Opaque edge identifier.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeId(pub u32);

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

pub(crate) fn id_list(es: &[EdgeId]) -> alloc::string::String {
    let parts: Vec<alloc::string::String> = es.iter().map(|e| alloc::format!("{e}")).collect();
    parts.join(",")
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("duplicate vertex id {0}")]
    DuplicateVertex(VertexId),
    #[error("duplicate edge id {0}")]
    DuplicateEdge(EdgeId),
    #[error("edge {edge} references unknown vertex {vertex}")]
    UnknownVertex { edge: EdgeId, vertex: VertexId },
    #[error("edge {edge} has {count} distinct endpoints, expected 1 or 2")]
    BadEndpointCount { edge: EdgeId, count: usize },
    #[error("edge {0} has different endpoints in the two operands")]
    InconsistentEndpoints(EdgeId),
}

/// A multigraph `(V, E, r)`.
///
/// Vertex and edge ids are kept sorted, and endpoints are stored as an
/// ordered pair `(u, v)` with `u <= v`; `u == v` is a loop.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiGraph {
    vertices: Vec<VertexId>,
    edges: Vec<EdgeId>,
    ends: Vec<(VertexId, VertexId)>,
}

/// Connected components of a graph together with the two component counts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComponentReport {
    /// One sorted vertex list per component, ordered by smallest vertex.
    pub partition: Vec<Vec<VertexId>>,
    pub n_total: usize,
    pub n_with_edge: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AlgebraOp {
    Union,
    Intersection,
    Subtraction,
}


/// Builds and validates a graph from explicit vertex ids and edge endpoint sets.
///
/// Endpoint lists are read as sets, so `[u, u]` is a loop.
pub fn build_graph(
    vertex_ids: &[VertexId],
    edge_specs: &[(EdgeId, Vec<VertexId>)],
) -> Result<MultiGraph, GraphError> {
    let mut vertices = vertex_ids.to_vec();
    vertices.sort_unstable();
    for w in vertices.windows(2) {
        if w[0] == w[1] {
            return Err(GraphError::DuplicateVertex(w[0]));
        }
    }
    let mut specs: Vec<(EdgeId, (VertexId, VertexId))> = Vec::with_capacity(edge_specs.len());
    for (id, ends) in edge_specs {
        let mut set = ends.clone();
        set.sort_unstable();
        set.dedup();
        if set.is_empty() || set.len() > 2 {
            return Err(GraphError::BadEndpointCount {
                edge: *id,
                count: set.len(),
            });
        }
        for v in &set {
            if vertices.binary_search(v).is_err() {
                return Err(GraphError::UnknownVertex {
                    edge: *id,
                    vertex: *v,
                });
            }
        }
        let pair = (set[0], *set.last().unwrap());
        specs.push((*id, pair));
    }
    specs.sort_unstable_by_key(|s| s.0);
    for w in specs.windows(2) {
        if w[0].0 == w[1].0 {
            return Err(GraphError::DuplicateEdge(w[0].0));
        }
    }
    Ok(MultiGraph {
        vertices,
        edges: specs.iter().map(|s| s.0).collect(),
        ends: specs.iter().map(|s| s.1).collect(),
    })
}

impl MultiGraph {
    /// The null graph `(∅, ∅, ∅)`.
    pub fn null() -> Self {
        Self::default()
    }

    /// Builds a graph from `(edge, u, v)` triples; vertices are the endpoints.
    pub fn from_edges(edges: &[(u32, u32, u32)]) -> Result<Self, GraphError> {
        Self::from_parts(&[], edges)
    }

    /// Like [`MultiGraph::from_edges`] with extra (possibly isolated) vertices.
    pub fn from_parts(
        extra_vertices: &[u32],
        edges: &[(u32, u32, u32)],
    ) -> Result<Self, GraphError> {
        let mut vs: Vec<VertexId> = extra_vertices.iter().map(|&v| VertexId(v)).collect();
        for &(_, u, v) in edges {
            vs.push(VertexId(u));
            vs.push(VertexId(v));
        }
        vs.sort_unstable();
        vs.dedup();
        let specs: Vec<(EdgeId, Vec<VertexId>)> = edges
            .iter()
            .map(|&(e, u, v)| (EdgeId(e), alloc::vec![VertexId(u), VertexId(v)]))
            .collect();
        build_graph(&vs, &specs)
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    pub fn edges(&self) -> &[EdgeId] {
        &self.edges
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn is_null(&self) -> bool {
        self.vertices.is_empty() && self.edges.is_empty()
    }

    pub fn vertex_index(&self, v: VertexId) -> Option<usize> {
        self.vertices.binary_search(&v).ok()
    }

    pub fn edge_index(&self, e: EdgeId) -> Option<usize> {
        self.edges.binary_search(&e).ok()
    }

    pub fn contains_vertex(&self, v: VertexId) -> bool {
        self.vertex_index(v).is_some()
    }

    pub fn contains_edge(&self, e: EdgeId) -> bool {
        self.edge_index(e).is_some()
    }

    /// Endpoints of `e` as `(u, v)` with `u <= v`.
    pub fn endpoints(&self, e: EdgeId) -> Option<(VertexId, VertexId)> {
        self.edge_index(e).map(|i| self.ends[i])
    }

    /// Endpoints by edge index.
    pub fn ends_at(&self, edge_index: usize) -> (VertexId, VertexId) {
        self.ends[edge_index]
    }

    /// `(edge, u, v)` triples in edge order.
    pub fn edge_triples(&self) -> impl Iterator<Item = (EdgeId, VertexId, VertexId)> + '_ {
        self.edges
            .iter()
            .zip(self.ends.iter())
            .map(|(&e, &(u, v))| (e, u, v))
    }

    pub fn is_loop(&self, e: EdgeId) -> bool {
        matches!(self.endpoints(e), Some((u, v)) if u == v)
    }

    /// Degree of `v`; a loop contributes 2.
    pub fn degree(&self, v: VertexId) -> usize {
        self.ends
            .iter()
            .map(|&(a, b)| usize::from(a == v) + usize::from(b == v))
            .sum()
    }

    /// Incidence lists by vertex index: `(edge index, other endpoint index)`.
    /// A loop appears once in the list of its vertex.
    pub fn adjacency(&self) -> Vec<Vec<(usize, usize)>> {
        let mut adj = alloc::vec![Vec::new(); self.vertices.len()];
        for (ei, &(u, v)) in self.ends.iter().enumerate() {
            let ui = self.vertex_index(u).expect("validated endpoint");
            let vi = self.vertex_index(v).expect("validated endpoint");
            adj[ui].push((ei, vi));
            if ui != vi {
                adj[vi].push((ei, ui));
            }
        }
        adj
    }

    /// `self ⊆ other`: ids contained and endpoint maps agree.
    pub fn is_subgraph_of(&self, other: &MultiGraph) -> bool {
        self.vertices.iter().all(|&v| other.contains_vertex(v))
            && self
                .edge_triples()
                .all(|(e, u, v)| other.endpoints(e) == Some((u, v)))
    }

    /// Subgraph spanned by the given edges of `self` (vertices are their endpoints).
    pub fn edge_subgraph<I: IntoIterator<Item = EdgeId>>(&self, edges: I) -> MultiGraph {
        let mut es: Vec<EdgeId> = edges.into_iter().filter(|&e| self.contains_edge(e)).collect();
        es.sort_unstable();
        es.dedup();
        let mut vs = Vec::with_capacity(es.len() * 2);
        let mut ends = Vec::with_capacity(es.len());
        for &e in &es {
            let (u, v) = self.endpoints(e).unwrap();
            vs.push(u);
            vs.push(v);
            ends.push((u, v));
        }
        vs.sort_unstable();
        vs.dedup();
        MultiGraph {
            vertices: vs,
            edges: es,
            ends,
        }
    }

    /// Subgraph with the given vertices and edges; endpoints of the edges are
    /// added to the vertex set.
    pub fn subgraph<I, J>(&self, vertices: I, edges: J) -> MultiGraph
    where
        I: IntoIterator<Item = VertexId>,
        J: IntoIterator<Item = EdgeId>,
    {
        let mut g = self.edge_subgraph(edges);
        let mut vs = core::mem::take(&mut g.vertices);
        vs.extend(vertices.into_iter().filter(|&v| self.contains_vertex(v)));
        vs.sort_unstable();
        vs.dedup();
        g.vertices = vs;
        g
    }

    /// Graph with `e` deleted and every vertex kept.
    pub fn without_edge(&self, e: EdgeId) -> MultiGraph {
        let mut g = self.clone();
        if let Some(i) = g.edge_index(e) {
            g.edges.remove(i);
            g.ends.remove(i);
        }
        g
    }

    /// Graph with isolated vertices dropped.
    pub fn without_isolated(&self) -> MultiGraph {
        self.edge_subgraph(self.edges.iter().copied())
    }

    pub fn union(&self, other: &MultiGraph) -> Result<MultiGraph, GraphError> {
        self.check_consistent(other)?;
        let mut vertices: Vec<VertexId> =
            self.vertices.iter().chain(other.vertices.iter()).copied().collect();
        vertices.sort_unstable();
        vertices.dedup();
        let mut map: BTreeMap<EdgeId, (VertexId, VertexId)> = self.edge_triples().map(|(e, u, v)| (e, (u, v))).collect();
        map.extend(other.edge_triples().map(|(e, u, v)| (e, (u, v))));
        Ok(MultiGraph {
            vertices,
            edges: map.keys().copied().collect(),
            ends: map.values().copied().collect(),
        })
    }

    pub fn intersection(&self, other: &MultiGraph) -> Result<MultiGraph, GraphError> {
        self.check_consistent(other)?;
        let vertices = self
            .vertices
            .iter()
            .copied()
            .filter(|&v| other.contains_vertex(v))
            .collect();
        let (edges, ends) = self
            .edge_triples()
            .filter(|&(e, _, _)| other.contains_edge(e))
            .map(|(e, u, v)| (e, (u, v)))
            .unzip();
        Ok(MultiGraph {
            vertices,
            edges,
            ends,
        })
    }

    /// `self − other`: edges of `self` not in `other`; a vertex survives if it is
    /// not a vertex of `other` or is an endpoint of a surviving edge.
    pub fn subtract(&self, other: &MultiGraph) -> MultiGraph {
        let (edges, ends): (Vec<EdgeId>, Vec<(VertexId, VertexId)>) = self
            .edge_triples()
            .filter(|&(e, _, _)| !other.contains_edge(e))
            .map(|(e, u, v)| (e, (u, v)))
            .unzip();
        let mut keep: Vec<VertexId> = self
            .vertices
            .iter()
            .copied()
            .filter(|&v| !other.contains_vertex(v))
            .collect();
        for &(u, v) in &ends {
            keep.push(u);
            keep.push(v);
        }
        keep.sort_unstable();
        keep.dedup();
        MultiGraph {
            vertices: keep,
            edges,
            ends,
        }
    }

    fn check_consistent(&self, other: &MultiGraph) -> Result<(), GraphError> {
        for (e, u, v) in self.edge_triples() {
            if let Some(p) = other.endpoints(e) {
                if p != (u, v) {
                    return Err(GraphError::InconsistentEndpoints(e));
                }
            }
        }
        Ok(())
    }

    /// Connected components under walk reachability.
    pub fn connected_components(&self) -> ComponentReport {
        let labels = self.component_labels();
        let n = labels.iter().copied().max().map_or(0, |m| m + 1);
        let mut partition: Vec<Vec<VertexId>> = alloc::vec![Vec::new(); n];
        for (i, &c) in labels.iter().enumerate() {
            partition[c].push(self.vertices[i]);
        }
        let mut has_edge = alloc::vec![false; n];
        for &(u, _) in &self.ends {
            has_edge[labels[self.vertex_index(u).unwrap()]] = true;
        }
        ComponentReport {
            n_total: n,
            n_with_edge: has_edge.iter().filter(|&&b| b).count(),
            partition,
        }
    }

    /// Component label per vertex index; labels are numbered in order of the
    /// smallest vertex of each component.
    pub fn component_labels(&self) -> Vec<usize> {
        let n = self.vertices.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for &(u, v) in &self.ends {
            let a = find(&mut parent, self.vertex_index(u).unwrap());
            let b = find(&mut parent, self.vertex_index(v).unwrap());
            if a != b {
                let (lo, hi) = if a < b { (a, b) } else { (b, a) };
                parent[hi] = lo;
            }
        }
        let mut label = alloc::vec![usize::MAX; n];
        let mut next = 0;
        let mut out = alloc::vec![0; n];
        for i in 0..n {
            let r = find(&mut parent, i);
            if label[r] == usize::MAX {
                label[r] = next;
                next += 1;
            }
            out[i] = label[r];
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.connected_components().n_total <= 1
    }

    /// Edges whose deletion increases the number of components, in id order.
    ///
    /// Iterative low-link search; the tree edge is skipped by edge id so that
    /// parallel edges are handled correctly.
    pub fn bridges(&self) -> Vec<EdgeId> {
        let n = self.vertices.len();
        let adj = self.adjacency();
        let mut disc = alloc::vec![usize::MAX; n];
        let mut low = alloc::vec![0usize; n];
        let mut is_bridge = alloc::vec![false; self.edges.len()];
        let mut clock = 0;
        for root in 0..n {
            if disc[root] != usize::MAX {
                continue;
            }
            disc[root] = clock;
            low[root] = clock;
            clock += 1;
            // (vertex, edge used to enter, next adjacency position)
            let mut stack: Vec<(usize, usize, usize)> = alloc::vec![(root, usize::MAX, 0)];
            while let Some(top) = stack.last_mut() {
                let (v, via, pos) = *top;
                if pos < adj[v].len() {
                    top.2 += 1;
                    let (ei, w) = adj[v][pos];
                    if ei == via || w == v {
                        continue;
                    }
                    if disc[w] == usize::MAX {
                        disc[w] = clock;
                        low[w] = clock;
                        clock += 1;
                        stack.push((w, ei, 0));
                    } else {
                        low[v] = low[v].min(disc[w]);
                    }
                } else {
                    stack.pop();
                    if let Some(&(p, _, _)) = stack.last() {
                        low[p] = low[p].min(low[v]);
                        if low[v] > disc[p] {
                            is_bridge[via] = true;
                        }
                    }
                }
            }
        }
        self.edges
            .iter()
            .zip(is_bridge)
            .filter(|(_, b)| *b)
            .map(|(&e, _)| e)
            .collect()
    }

    pub fn is_bridgeless(&self) -> bool {
        self.bridges().is_empty()
    }

    /// Applies one of the three set operations.
    pub fn apply(&self, op: AlgebraOp, other: &MultiGraph) -> Result<MultiGraph, GraphError> {
        match op {
            AlgebraOp::Union => self.union(other),
            AlgebraOp::Intersection => self.intersection(other),
            AlgebraOp::Subtraction => Ok(self.subtract(other)),
        }
    }

    /// Circuit rank `|E| − |V| + #components`.
    pub fn circuit_rank(&self) -> usize {
        self.edges.len() + self.connected_components().n_total - self.vertices.len()
    }
}

/// Applies a graph set operation; see [`MultiGraph::apply`].
pub fn graph_algebra(
    op: AlgebraOp,
    g: &MultiGraph,
    h: &MultiGraph,
) -> Result<MultiGraph, GraphError> {
    g.apply(op, h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn k4() -> MultiGraph {
        MultiGraph::from_edges(&[(1, 1, 2), (2, 1, 3), (3, 1, 4), (4, 2, 3), (5, 2, 4), (6, 3, 4)])
            .unwrap()
    }

    #[test]
    fn triangle_and_theta_build() {
        let t = MultiGraph::from_edges(&[(1, 1, 2), (2, 2, 3), (3, 1, 3)]).unwrap();
        assert_eq!((t.vertex_count(), t.edge_count()), (3, 3));
        let theta = MultiGraph::from_edges(&[(1, 1, 2), (2, 1, 2), (3, 1, 2)]).unwrap();
        assert_eq!(theta.degree(VertexId(1)), 3);
    }

    #[test]
    fn build_errors() {
        let vs = [VertexId(1), VertexId(2), VertexId(3)];
        let err = build_graph(&vs, &[(EdgeId(1), vec![VertexId(1), VertexId(2), VertexId(3)])]);
        assert_eq!(
            err,
            Err(GraphError::BadEndpointCount {
                edge: EdgeId(1),
                count: 3
            })
        );
        let err = build_graph(&vs, &[(EdgeId(1), vec![])]);
        assert!(matches!(err, Err(GraphError::BadEndpointCount { count: 0, .. })));
        let err = build_graph(&vs, &[(EdgeId(1), vec![VertexId(1), VertexId(9)])]);
        assert!(matches!(err, Err(GraphError::UnknownVertex { .. })));
        let err = build_graph(&[VertexId(1), VertexId(1)], &[]);
        assert_eq!(err, Err(GraphError::DuplicateVertex(VertexId(1))));
        let err = build_graph(
            &vs,
            &[
                (EdgeId(4), vec![VertexId(1), VertexId(2)]),
                (EdgeId(4), vec![VertexId(2), VertexId(3)]),
            ],
        );
        assert_eq!(err, Err(GraphError::DuplicateEdge(EdgeId(4))));
    }

    #[test]
    fn loop_has_one_endpoint_and_degree_two() {
        let g = MultiGraph::from_edges(&[(7, 3, 3)]).unwrap();
        assert!(g.is_loop(EdgeId(7)));
        assert_eq!(g.degree(VertexId(3)), 2);
        assert!(g.bridges().is_empty());
    }

    #[test]
    fn subtraction_keeps_vertices_with_remaining_edges() {
        let g = k4();
        let a = g.edge_subgraph([EdgeId(1)]);
        let k = g.subtract(&a);
        assert_eq!(k.vertex_count(), 4);
        assert_eq!(k.edge_count(), 5);

        let t = MultiGraph::from_edges(&[(1, 1, 2), (2, 2, 3), (3, 1, 3)]).unwrap();
        assert!(t.subtract(&t).is_null());
        assert_eq!(g.intersection(&g).unwrap(), g);
    }

    #[test]
    fn subtraction_ignores_single_vertex_components() {
        let g = k4();
        let h2 = g.edge_subgraph([EdgeId(1), EdgeId(6)]);
        let mut h1 = h2.clone();
        h1 = h1.union(&MultiGraph::from_parts(&[2], &[]).unwrap()).unwrap();
        assert_eq!(g.subtract(&h1), g.subtract(&h2));
    }

    #[test]
    fn inconsistent_union_is_rejected() {
        let a = MultiGraph::from_edges(&[(1, 1, 2)]).unwrap();
        let b = MultiGraph::from_edges(&[(1, 1, 3)]).unwrap();
        assert_eq!(a.union(&b), Err(GraphError::InconsistentEndpoints(EdgeId(1))));
        assert!(a.intersection(&b).is_err());
    }

    #[test]
    fn component_counts() {
        let two = MultiGraph::from_edges(&[
            (1, 1, 2),
            (2, 2, 3),
            (3, 1, 3),
            (4, 4, 5),
            (5, 5, 6),
            (6, 4, 6),
        ])
        .unwrap();
        let r = two.connected_components();
        assert_eq!((r.n_total, r.n_with_edge), (2, 2));
        let iso = MultiGraph::from_parts(&[9], &[(1, 1, 2), (2, 2, 3), (3, 1, 3)]).unwrap();
        let r = iso.connected_components();
        assert_eq!((r.n_total, r.n_with_edge), (2, 1));
        assert_eq!(r.partition[1], vec![VertexId(9)]);
        let r = MultiGraph::null().connected_components();
        assert_eq!((r.n_total, r.n_with_edge), (0, 0));
    }

    #[test]
    fn bridge_examples() {
        let dumbbell = MultiGraph::from_edges(&[
            (1, 1, 2),
            (2, 2, 3),
            (3, 1, 3),
            (4, 3, 4),
            (5, 4, 5),
            (6, 5, 6),
            (7, 4, 6),
        ])
        .unwrap();
        assert_eq!(dumbbell.bridges(), vec![EdgeId(4)]);
        let theta = MultiGraph::from_edges(&[(1, 1, 2), (2, 1, 2), (3, 1, 2)]).unwrap();
        assert!(theta.is_bridgeless());
        let digon_tail = MultiGraph::from_edges(&[(1, 1, 2), (2, 1, 2), (3, 2, 3)]).unwrap();
        assert_eq!(digon_tail.bridges(), vec![EdgeId(3)]);
    }

    #[test]
    fn bridges_match_removal_test() {
        let g = MultiGraph::from_edges(&[
            (1, 1, 2),
            (2, 2, 3),
            (3, 3, 1),
            (4, 3, 4),
            (5, 4, 5),
            (6, 5, 5),
            (7, 5, 6),
            (8, 6, 4),
            (9, 6, 7),
        ])
        .unwrap();
        let base = g.connected_components().n_total;
        let oracle: Vec<EdgeId> = g
            .edges()
            .iter()
            .copied()
            .filter(|&e| g.without_edge(e).connected_components().n_total > base)
            .collect();
        assert_eq!(g.bridges(), oracle);
    }
}
