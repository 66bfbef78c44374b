//! Cycle bodies, the cyclic core, cycle generic vertices and pieces.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use fixedbitset::FixedBitSet;
use thiserror::Error;

use crate::graph::{EdgeId, MultiGraph, VertexId};
use crate::walk::Walk;

/// Default cap on the number of cycles enumerated for one graph.
pub const DEFAULT_MAX_CYCLES: usize = 100_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CycleError {
    #[error("more than {cap} cycles; instance too large for exhaustive analysis")]
    CapExceeded { cap: usize },
    #[error("edge set is not a cycle body of the host graph")]
    NotACycle,
    #[error("edge {0} is not in the host graph")]
    UnknownEdge(EdgeId),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PieceError {
    #[error("input walk is not a path of the host graph")]
    NotAPath,
}

/// The body of a cycle: its edge set and vertex set.
///
/// Two bodies are equal iff their edge sets are equal; ordering is by the
/// sorted edge-id list, which is the canonical order used everywhere.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CycleBody {
    edges: Vec<EdgeId>,
    vertices: Vec<VertexId>,
}

impl CycleBody {
    /// Validates that `edges` form a connected 2-regular subgraph of `host`.
    pub fn from_edges(host: &MultiGraph, edges: &[EdgeId]) -> Result<Self, CycleError> {
        for &e in edges {
            if !host.contains_edge(e) {
                return Err(CycleError::UnknownEdge(e));
            }
        }
        let sub = host.edge_subgraph(edges.iter().copied());
        if sub.edge_count() == 0 || sub.edge_count() != edges.len() {
            return Err(CycleError::NotACycle);
        }
        if !sub.is_connected() || sub.vertices().iter().any(|&v| sub.degree(v) != 2) {
            return Err(CycleError::NotACycle);
        }
        Ok(Self {
            edges: sub.edges().to_vec(),
            vertices: sub.vertices().to_vec(),
        })
    }

    /// Sorted edge ids.
    pub fn edges(&self) -> &[EdgeId] {
        &self.edges
    }

    /// Sorted vertex ids.
    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn contains_edge(&self, e: EdgeId) -> bool {
        self.edges.binary_search(&e).is_ok()
    }

    pub fn contains_vertex(&self, v: VertexId) -> bool {
        self.vertices.binary_search(&v).is_ok()
    }

    /// The body as a subgraph of `host`.
    pub fn graph(&self, host: &MultiGraph) -> MultiGraph {
        host.edge_subgraph(self.edges.iter().copied())
    }

    /// Whether every edge of the body belongs to `g` with the same endpoints.
    pub fn lies_in(&self, host: &MultiGraph, g: &MultiGraph) -> bool {
        self.edges
            .iter()
            .all(|&e| g.endpoints(e).is_some() && g.endpoints(e) == host.endpoints(e))
    }

    /// Canonical traversal: starts at the smallest vertex and leaves it along
    /// the smaller of its two cycle edges.
    pub fn walk(&self, host: &MultiGraph) -> Walk {
        let start = self.vertices[0];
        if self.edges.len() == 1 {
            return Walk::new(alloc::vec![start, start], self.edges.clone()).unwrap();
        }
        let mut vertices = alloc::vec![start];
        let mut edges: Vec<EdgeId> = Vec::with_capacity(self.edges.len());
        let mut at = start;
        let mut used = alloc::vec![false; self.edges.len()];
        for _ in 0..self.edges.len() {
            let (k, &e) = self
                .edges
                .iter()
                .enumerate()
                .find(|&(k, &e)| {
                    let (u, v) = host.endpoints(e).unwrap();
                    !used[k] && (u == at || v == at)
                })
                .expect("cycle body is 2-regular");
            used[k] = true;
            let (u, v) = host.endpoints(e).unwrap();
            at = if u == at { v } else { u };
            edges.push(e);
            vertices.push(at);
        }
        Walk::new(vertices, edges).unwrap()
    }
}

/// All cycle bodies of `g`, in canonical order.
///
/// Rooted backtracking: for each root `s`, simple paths through vertices
/// larger than `s` are extended until an edge closes them back to `s`; a
/// cycle is kept only in the direction whose first edge is smaller than its
/// closing edge. Loops are 1-cycles.
pub fn enumerate_cycles(g: &MultiGraph, max_cycles: usize) -> Result<Vec<CycleBody>, CycleError> {
    let adj = g.adjacency();
    let n = g.vertex_count();
    let mut out: Vec<CycleBody> = Vec::new();
    for (e, u, v) in g.edge_triples() {
        if u == v {
            out.push(CycleBody {
                edges: alloc::vec![e],
                vertices: alloc::vec![u],
            });
        }
    }
    if out.len() > max_cycles {
        return Err(CycleError::CapExceeded { cap: max_cycles });
    }
    let mut on_path = alloc::vec![false; n];
    let mut path_v: Vec<usize> = Vec::new();
    let mut path_e: Vec<usize> = Vec::new();
    for s in 0..n {
        on_path[s] = true;
        path_v.push(s);
        extend(
            g, &adj, s, s, &mut on_path, &mut path_v, &mut path_e, &mut out, max_cycles,
        )?;
        path_v.pop();
        on_path[s] = false;
    }
    out.sort_unstable();
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn extend(
    g: &MultiGraph,
    adj: &[Vec<(usize, usize)>],
    root: usize,
    at: usize,
    on_path: &mut [bool],
    path_v: &mut Vec<usize>,
    path_e: &mut Vec<usize>,
    out: &mut Vec<CycleBody>,
    cap: usize,
) -> Result<(), CycleError> {
    for &(ei, w) in &adj[at] {
        if w == at {
            continue;
        }
        if w == root {
            if let Some(&first) = path_e.first() {
                if first < ei {
                    let mut edges: Vec<EdgeId> = path_e.iter().map(|&i| g.edges()[i]).collect();
                    edges.push(g.edges()[ei]);
                    edges.sort_unstable();
                    let mut vertices: Vec<VertexId> =
                        path_v.iter().map(|&i| g.vertices()[i]).collect();
                    vertices.sort_unstable();
                    out.push(CycleBody { edges, vertices });
                    if out.len() > cap {
                        return Err(CycleError::CapExceeded { cap });
                    }
                }
            }
            continue;
        }
        if w < root || on_path[w] {
            continue;
        }
        on_path[w] = true;
        path_v.push(w);
        path_e.push(ei);
        extend(g, adj, root, w, on_path, path_v, path_e, out, cap)?;
        path_e.pop();
        path_v.pop();
        on_path[w] = false;
    }
    Ok(())
}

/// Cycle bodies of a graph with incidence bitsets relative to its edge and
/// vertex indices.
#[derive(Clone, Debug)]
pub struct CycleTable {
    cycles: Vec<CycleBody>,
    edge_masks: Vec<FixedBitSet>,
    vertex_masks: Vec<FixedBitSet>,
    by_edge: Vec<FixedBitSet>,
    by_vertex: Vec<FixedBitSet>,
}

impl CycleTable {
    pub fn new(g: &MultiGraph, max_cycles: usize) -> Result<Self, CycleError> {
        Ok(Self::from_cycles(g, enumerate_cycles(g, max_cycles)?))
    }

    /// Builds the table from an already enumerated (sorted) cycle list.
    pub fn from_cycles(g: &MultiGraph, cycles: Vec<CycleBody>) -> Self {
        let (m, n, c) = (g.edge_count(), g.vertex_count(), cycles.len());
        let mut edge_masks = Vec::with_capacity(c);
        let mut vertex_masks = Vec::with_capacity(c);
        let mut by_edge = alloc::vec![FixedBitSet::with_capacity(c); m];
        let mut by_vertex = alloc::vec![FixedBitSet::with_capacity(c); n];
        for (ci, cyc) in cycles.iter().enumerate() {
            let mut em = FixedBitSet::with_capacity(m);
            for &e in &cyc.edges {
                let i = g.edge_index(e).expect("cycle edge in host");
                em.insert(i);
                by_edge[i].insert(ci);
            }
            let mut vm = FixedBitSet::with_capacity(n);
            for &v in &cyc.vertices {
                let i = g.vertex_index(v).expect("cycle vertex in host");
                vm.insert(i);
                by_vertex[i].insert(ci);
            }
            edge_masks.push(em);
            vertex_masks.push(vm);
        }
        Self {
            cycles,
            edge_masks,
            vertex_masks,
            by_edge,
            by_vertex,
        }
    }

    pub fn cycles(&self) -> &[CycleBody] {
        &self.cycles
    }

    pub fn len(&self) -> usize {
        self.cycles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cycles.is_empty()
    }

    pub fn index_of(&self, c: &CycleBody) -> Option<usize> {
        self.cycles.binary_search(c).ok()
    }

    /// Index of the cycle with exactly this edge set.
    pub fn index_of_edges(&self, edges: &[EdgeId]) -> Option<usize> {
        self.cycles
            .binary_search_by(|c| c.edges.as_slice().cmp(edges))
            .ok()
    }

    /// Edge-index bitset of cycle `ci`.
    pub fn edge_mask(&self, ci: usize) -> &FixedBitSet {
        &self.edge_masks[ci]
    }

    /// Vertex-index bitset of cycle `ci`.
    pub fn vertex_mask(&self, ci: usize) -> &FixedBitSet {
        &self.vertex_masks[ci]
    }

    /// Cycles through the edge with index `ei`.
    pub fn through_edge(&self, ei: usize) -> &FixedBitSet {
        &self.by_edge[ei]
    }

    /// Cycles through the vertex with index `vi`: the set `cycle(v)`.
    pub fn through_vertex(&self, vi: usize) -> &FixedBitSet {
        &self.by_vertex[vi]
    }

    /// The table of `sub`, a subgraph of the host: its cycles are exactly the
    /// host cycles whose edges all lie in `sub`.
    pub fn restrict_to(&self, sub: &MultiGraph) -> CycleTable {
        let kept = self
            .cycles
            .iter()
            .filter(|c| c.edges.iter().all(|&e| sub.contains_edge(e)))
            .cloned()
            .collect();
        CycleTable::from_cycles(sub, kept)
    }

    /// Total number of cycle/edge incidences.
    pub fn incidences(&self) -> usize {
        self.cycles.iter().map(|c| c.len()).sum()
    }
}

/// The union `G^c` of all cycle bodies, with `degc` for every vertex of `G`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyclicCore {
    pub core: MultiGraph,
    pub degc: BTreeMap<VertexId, usize>,
}

pub fn cyclic_core(g: &MultiGraph, table: &CycleTable) -> CyclicCore {
    let mut core = MultiGraph::null();
    let mut edges: Vec<EdgeId> = table.cycles().iter().flat_map(|c| c.edges.iter().copied()).collect();
    edges.sort_unstable();
    edges.dedup();
    if !edges.is_empty() {
        core = g.edge_subgraph(edges);
    }
    let degc = g
        .vertices()
        .iter()
        .map(|&v| {
            let d = if core.contains_vertex(v) { core.degree(v) } else { 0 };
            (v, d)
        })
        .collect();
    CyclicCore { core, degc }
}

/// Vertices with `degc >= 3` or whose `cycle(v)` is not strictly contained
/// in any other `cycle(v')`.
pub fn cycle_generic_vertices(g: &MultiGraph, table: &CycleTable, core: &CyclicCore) -> Vec<VertexId> {
    let n = g.vertex_count();
    (0..n)
        .filter(|&i| {
            let v = g.vertices()[i];
            if core.degc[&v] >= 3 {
                return true;
            }
            let mine = table.through_vertex(i);
            !(0..n).any(|j| {
                let other = table.through_vertex(j);
                j != i && mine.is_subset(other) && !other.is_subset(mine)
            })
        })
        .map(|i| g.vertices()[i])
        .collect()
}

/// Whether a path of `g` is a piece: length below 2, or every internal vertex
/// has a cycle meeting both the left and the right side.
pub fn is_piece(g: &MultiGraph, table: &CycleTable, w: &Walk) -> bool {
    let idx: Vec<usize> = w.edges().iter().map(|&e| g.edge_index(e).unwrap()).collect();
    interval_is_piece(table, &idx, 0, idx.len())
}

fn interval_is_piece(table: &CycleTable, idx: &[usize], lo: usize, hi: usize) -> bool {
    if hi - lo < 2 {
        return true;
    }
    (lo + 1..hi).all(|split| {
        (0..table.len()).any(|c| {
            let m = table.edge_mask(c);
            idx[lo..split].iter().any(|&e| m.contains(e)) && idx[split..hi].iter().any(|&e| m.contains(e))
        })
    })
}

/// All maximal pieces of the path `w`, ordered by position.
///
/// When the maximal pieces overlap without coinciding, all of them are still
/// returned; callers can test disjointness.
pub fn decompose_maximal_pieces(
    g: &MultiGraph,
    table: &CycleTable,
    w: &Walk,
) -> Result<Vec<Walk>, PieceError> {
    if w.validate(g).is_err() || !w.is_path() {
        return Err(PieceError::NotAPath);
    }
    let idx: Vec<usize> = w.edges().iter().map(|&e| g.edge_index(e).unwrap()).collect();
    let k = idx.len();
    let mut pieces: Vec<(usize, usize)> = Vec::new();
    for lo in 0..k {
        for hi in lo + 1..=k {
            if interval_is_piece(table, &idx, lo, hi) {
                pieces.push((lo, hi));
            }
        }
    }
    let maximal: Vec<(usize, usize)> = pieces
        .iter()
        .copied()
        .filter(|&(a, b)| !pieces.iter().any(|&(c, d)| c <= a && b <= d && (c, d) != (a, b)))
        .collect();
    Ok(maximal.into_iter().map(|(a, b)| w.sub_walk(a, b)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn theta() -> MultiGraph {
        MultiGraph::from_edges(&[(1, 1, 2), (2, 1, 2), (3, 1, 2)]).unwrap()
    }

    fn k4() -> MultiGraph {
        MultiGraph::from_edges(&[(1, 1, 2), (2, 1, 3), (3, 1, 4), (4, 2, 3), (5, 2, 4), (6, 3, 4)])
            .unwrap()
    }

    fn subdivided_theta() -> MultiGraph {
        // hubs 1 and 2, midpoints 3, 4, 5
        MultiGraph::from_edges(&[(1, 1, 3), (2, 3, 2), (3, 1, 4), (4, 4, 2), (5, 1, 5), (6, 5, 2)])
            .unwrap()
    }

    #[test]
    fn enumeration_counts() {
        let tri = MultiGraph::from_edges(&[(1, 1, 2), (2, 2, 3), (3, 1, 3)]).unwrap();
        assert_eq!(enumerate_cycles(&tri, 10).unwrap().len(), 1);
        assert_eq!(enumerate_cycles(&theta(), 10).unwrap().len(), 3);
        assert_eq!(enumerate_cycles(&k4(), 10).unwrap().len(), 7);
        assert_eq!(
            enumerate_cycles(&k4(), 6),
            Err(CycleError::CapExceeded { cap: 6 })
        );
        let loops = MultiGraph::from_edges(&[(1, 1, 1), (2, 1, 1), (3, 1, 2)]).unwrap();
        assert_eq!(enumerate_cycles(&loops, 10).unwrap().len(), 2);
    }

    #[test]
    fn cycle_body_validation() {
        let g = k4();
        assert!(CycleBody::from_edges(&g, &[EdgeId(1), EdgeId(2), EdgeId(4)]).is_ok());
        assert_eq!(
            CycleBody::from_edges(&g, &[EdgeId(1), EdgeId(2)]),
            Err(CycleError::NotACycle)
        );
        assert_eq!(
            CycleBody::from_edges(&g, &[EdgeId(9)]),
            Err(CycleError::UnknownEdge(EdgeId(9)))
        );
        let c = CycleBody::from_edges(&g, &[EdgeId(1), EdgeId(5), EdgeId(6), EdgeId(2)]).unwrap();
        let w = c.walk(&g);
        assert!(w.is_cycle());
        w.validate(&g).unwrap();
        assert_eq!(w.edges()[0], EdgeId(1));
    }

    #[test]
    fn core_of_dumbbell_drops_bridge() {
        let g = MultiGraph::from_edges(&[
            (1, 1, 2),
            (2, 2, 3),
            (3, 1, 3),
            (4, 3, 4),
            (5, 4, 5),
            (6, 5, 6),
            (7, 4, 6),
        ])
        .unwrap();
        let t = CycleTable::new(&g, 100).unwrap();
        let core = cyclic_core(&g, &t);
        assert_eq!(core.core.edge_count(), 6);
        assert!(!core.core.contains_edge(EdgeId(4)));
        assert!(core.degc.values().all(|&d| d == 2));
    }

    #[test]
    fn core_of_tree_is_null() {
        let g = MultiGraph::from_edges(&[(1, 1, 2), (2, 2, 3)]).unwrap();
        let t = CycleTable::new(&g, 100).unwrap();
        let core = cyclic_core(&g, &t);
        assert!(core.core.is_null());
        assert!(core.degc.values().all(|&d| d == 0));
    }

    #[test]
    fn generic_vertices_examples() {
        let g = subdivided_theta();
        let t = CycleTable::new(&g, 100).unwrap();
        let core = cyclic_core(&g, &t);
        assert_eq!(cycle_generic_vertices(&g, &t, &core), [VertexId(1), VertexId(2)]);

        let c5 = MultiGraph::from_edges(&[(1, 1, 2), (2, 2, 3), (3, 3, 4), (4, 4, 5), (5, 5, 1)])
            .unwrap();
        let t = CycleTable::new(&c5, 100).unwrap();
        let core = cyclic_core(&c5, &t);
        assert_eq!(cycle_generic_vertices(&c5, &t, &core).len(), 5);

        let g = k4();
        let t = CycleTable::new(&g, 100).unwrap();
        let core = cyclic_core(&g, &t);
        assert_eq!(cycle_generic_vertices(&g, &t, &core).len(), 4);
        assert!(core.degc.values().all(|&d| d == 3));
    }

    #[test]
    fn maximal_pieces() {
        let g = subdivided_theta();
        let t = CycleTable::new(&g, 100).unwrap();
        let single = Walk::from_sequence(&[1, 1, 3]).unwrap();
        assert_eq!(decompose_maximal_pieces(&g, &t, &single).unwrap(), [single.clone()]);
        // 3 -2- 2 -4- 4 crosses hub 2; cycle {1,2,3,4} meets both sides.
        let across = Walk::from_sequence(&[3, 2, 2, 4, 4]).unwrap();
        assert_eq!(decompose_maximal_pieces(&g, &t, &across).unwrap(), [across.clone()]);

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
        let t = CycleTable::new(&dumbbell, 100).unwrap();
        let w = Walk::from_sequence(&[2, 2, 3, 4, 4, 5, 5]).unwrap();
        let pieces = decompose_maximal_pieces(&dumbbell, &t, &w).unwrap();
        assert_eq!(pieces.len(), 3);
        assert!(pieces.iter().all(|p| p.len() == 1));

        let not_path = Walk::from_sequence(&[1, 1, 2, 1, 1]).unwrap();
        assert_eq!(
            decompose_maximal_pieces(&dumbbell, &t, &not_path),
            Err(PieceError::NotAPath)
        );
    }
}
