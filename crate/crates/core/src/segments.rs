//! Path segments, cycle segments, the reduced graph and cycle components.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use fixedbitset::FixedBitSet;
use thiserror::Error;

use crate::cycles::{cycle_generic_vertices, cyclic_core, CycleBody, CycleTable, CyclicCore};
use crate::graph::{EdgeId, MultiGraph, VertexId};
use crate::signlab::cdim;
use crate::walk::Walk;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SegmentError {
    #[error("graph is not strong cyclic")]
    NotStrongCyclic,
    #[error("graph has cyclic dimension {cdim}, need at least 2")]
    CdimTooSmall { cdim: usize },
    #[error("no path segment among {tried} candidates leaves a strong cyclic bridgeless graph")]
    NoRemovableSegment { tried: usize },
    #[error("requested dimension {m} outside 1..={cdim}")]
    DimensionOutOfRange { m: usize, cdim: usize },
    #[error("cyclic dimension could not be certified")]
    Uncertified,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EtaError {
    #[error("cycle {cycle} does not map to a cycle of the reduced graph")]
    NotACycle { cycle: usize },
    #[error("cycles {a} and {b} map to the same reduced cycle")]
    NotInjective { a: usize, b: usize },
    #[error("host has {host} cycles but the reduced graph has {reduced}")]
    CountMismatch { host: usize, reduced: usize },
}

/// Path segments of `g`, each a walk between cycle generic vertices through
/// non-generic ones, oriented canonically. Sorted by edge set.
pub fn path_segments(g: &MultiGraph, table: &CycleTable) -> Vec<Walk> {
    let core = cyclic_core(g, table);
    let generic = cycle_generic_vertices(g, table, &core);
    path_segments_from(&core.core, &generic)
}

/// Chains of core edges between generic vertices.
///
/// Non-generic core vertices have core degree exactly 2, so every chain is
/// forced once its first edge is chosen.
pub fn path_segments_from(core: &MultiGraph, generic: &[VertexId]) -> Vec<Walk> {
    let adj = core.adjacency();
    let is_generic: Vec<bool> = core.vertices().iter().map(|v| generic.binary_search(v).is_ok()).collect();
    let mut seen = FixedBitSet::with_capacity(core.edge_count());
    let mut out: Vec<Walk> = Vec::new();
    for (start, list) in adj.iter().enumerate() {
        if !is_generic[start] {
            continue;
        }
        for &(first, next) in list {
            if seen.contains(first) {
                continue;
            }
            let mut vs = alloc::vec![core.vertices()[start]];
            let mut es = alloc::vec![core.edges()[first]];
            seen.insert(first);
            let (mut prev, mut x) = (first, next);
            while !is_generic[x] {
                let Some(&(e, y)) = adj[x].iter().find(|&&(e, _)| e != prev) else {
                    break;
                };
                if seen.contains(e) {
                    break;
                }
                seen.insert(e);
                vs.push(core.vertices()[x]);
                es.push(core.edges()[e]);
                prev = e;
                x = y;
            }
            vs.push(core.vertices()[x]);
            let w = Walk::new(vs, es).expect("alternating by construction");
            let inv = w.inverse();
            out.push(if inv < w { inv } else { w });
        }
    }
    out.sort_by(|a, b| sorted_edges(a).cmp(&sorted_edges(b)));
    out
}

fn sorted_edges(w: &Walk) -> Vec<EdgeId> {
    let mut es = w.edges().to_vec();
    es.sort_unstable();
    es
}

/// Whether `k` belongs to the family of subgraphs that every cycle sharing
/// an edge with `k` contains entirely.
pub fn in_segment_family(g: &MultiGraph, table: &CycleTable, k: &MultiGraph) -> bool {
    let mut km = FixedBitSet::with_capacity(g.edge_count());
    for &e in k.edges() {
        match g.edge_index(e) {
            Some(i) => km.insert(i),
            None => return false,
        }
    }
    let kv: Vec<usize> = match k.vertices().iter().map(|&v| g.vertex_index(v)).collect() {
        Some(v) => v,
        None => return false,
    };
    (0..table.len()).all(|c| {
        let em = table.edge_mask(c);
        em.is_disjoint(&km) || (km.is_subset(em) && kv.iter().all(|&v| table.vertex_mask(c).contains(v)))
    })
}

/// Whether `h` is a cycle segment with at least one edge.
///
/// The family is closed under taking subgraphs, so maximality is decided by
/// single-vertex and single-edge extensions.
pub fn is_cycle_segment(g: &MultiGraph, table: &CycleTable, h: &MultiGraph) -> bool {
    if h.edge_count() == 0 || !h.is_subgraph_of(g) || !in_segment_family(g, table, h) {
        return false;
    }
    let grows_vertex = g
        .vertices()
        .iter()
        .filter(|&&v| !h.contains_vertex(v))
        .any(|&v| {
            let bigger = g.subgraph(h.vertices().iter().copied().chain([v]), h.edges().iter().copied());
            in_segment_family(g, table, &bigger)
        });
    let grows_edge = g.edges().iter().filter(|&&e| !h.contains_edge(e)).any(|&e| {
        let bigger = g.subgraph(h.vertices().iter().copied(), h.edges().iter().copied().chain([e]));
        in_segment_family(g, table, &bigger)
    });
    !grows_vertex && !grows_edge
}

/// Cycle segments with at least one edge, sorted by edge set.
///
/// Core edges through exactly the same cycles form one segment; its vertices
/// are all vertices common to those cycles, so a segment may contain vertices
/// that none of its edges touch.
pub fn cycle_segments(g: &MultiGraph, table: &CycleTable) -> Vec<MultiGraph> {
    let mut classes: BTreeMap<Vec<usize>, Vec<EdgeId>> = BTreeMap::new();
    for (i, &e) in g.edges().iter().enumerate() {
        let through = table.through_edge(i);
        if through.count_ones(..) > 0 {
            classes.entry(through.ones().collect()).or_default().push(e);
        }
    }
    let mut out: Vec<MultiGraph> = classes
        .into_iter()
        .map(|(cycles, edges)| {
            let mut common = table.vertex_mask(cycles[0]).clone();
            for &c in &cycles[1..] {
                common.intersect_with(table.vertex_mask(c));
            }
            g.subgraph(common.ones().map(|i| g.vertices()[i]), edges)
        })
        .collect();
    out.sort_by(|a, b| a.edges().cmp(b.edges()));
    out
}

/// Edge classes of the co-cycle relation on the cyclic core.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycleComponents {
    /// Cycle components, sorted by edge set.
    pub classes: Vec<MultiGraph>,
    /// Edges on no cycle.
    pub non_core_edges: Vec<EdgeId>,
    pub bridges: Vec<EdgeId>,
}

impl CycleComponents {
    /// Whether the classes partition every edge of the host.
    pub fn is_partition(&self) -> bool {
        self.non_core_edges.is_empty()
    }
}

pub fn cycle_components(g: &MultiGraph, table: &CycleTable) -> CycleComponents {
    let m = g.edge_count();
    let mut parent: Vec<usize> = (0..m).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    let mut on_cycle = FixedBitSet::with_capacity(m);
    for c in 0..table.len() {
        let mut it = table.edge_mask(c).ones();
        let Some(first) = it.next() else { continue };
        on_cycle.insert(first);
        for e in it {
            on_cycle.insert(e);
            let (a, b) = (find(&mut parent, first), find(&mut parent, e));
            parent[a.max(b)] = a.min(b);
        }
    }
    let mut groups: BTreeMap<usize, Vec<EdgeId>> = BTreeMap::new();
    let mut non_core_edges = Vec::new();
    for i in 0..m {
        if on_cycle.contains(i) {
            let r = find(&mut parent, i);
            groups.entry(r).or_default().push(g.edges()[i]);
        } else {
            non_core_edges.push(g.edges()[i]);
        }
    }
    let mut classes: Vec<MultiGraph> = groups.into_values().map(|es| g.edge_subgraph(es)).collect();
    classes.sort_by(|a, b| a.edges().cmp(b.edges()));
    CycleComponents {
        classes,
        non_core_edges,
        bridges: g.bridges(),
    }
}

/// Not cycle separable: the edges cannot be split into two nonempty parts
/// with every cycle inside one part.
pub fn is_strong_cyclic(g: &MultiGraph, table: &CycleTable) -> bool {
    let comps = cycle_components(g, table);
    comps.classes.len() + comps.non_core_edges.len() <= 1
}

/// Number of path segments sharing an edge with `c`.
pub fn segments_in_cycle(segments: &[Walk], c: &CycleBody) -> usize {
    segments
        .iter()
        .filter(|w| w.edges().iter().any(|&e| c.contains_edge(e)))
        .count()
}

/// `G_c`: cycle generic vertices joined by one edge per path segment.
///
/// Edge `i` of the reduced graph stands for `segments[i]`; vertices keep
/// their ids.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReducedGraph {
    pub graph: MultiGraph,
    pub segments: Vec<Walk>,
}

impl ReducedGraph {
    pub fn new(generic: &[VertexId], segments: &[Walk]) -> Self {
        let edges: Vec<(u32, u32, u32)> = segments
            .iter()
            .enumerate()
            .map(|(i, w)| (i as u32, w.start().0, w.end().0))
            .collect();
        let vertices: Vec<u32> = generic.iter().map(|v| v.0).collect();
        let graph = MultiGraph::from_parts(&vertices, &edges).expect("segment ends are generic vertices");
        Self {
            graph,
            segments: segments.to_vec(),
        }
    }

    pub fn segment(&self, e: EdgeId) -> Option<&Walk> {
        self.segments.get(e.0 as usize)
    }

    /// The map `η` sending each host cycle to the reduced cycle formed by the
    /// path segments it contains, checked to be a bijection.
    pub fn eta(&self, table: &CycleTable, reduced_table: &CycleTable) -> Result<Vec<CycleBody>, EtaError> {
        let mut images: Vec<CycleBody> = Vec::with_capacity(table.len());
        for (ci, c) in table.cycles().iter().enumerate() {
            let es: Vec<EdgeId> = self
                .segments
                .iter()
                .enumerate()
                .filter(|(_, w)| w.edges().iter().any(|&e| c.contains_edge(e)))
                .map(|(i, _)| EdgeId(i as u32))
                .collect();
            let covered: usize = es.iter().map(|e| self.segments[e.0 as usize].len()).sum();
            if covered != c.len() {
                return Err(EtaError::NotACycle { cycle: ci });
            }
            let body = CycleBody::from_edges(&self.graph, &es).map_err(|_| EtaError::NotACycle { cycle: ci })?;
            images.push(body);
        }
        let mut order: Vec<usize> = (0..images.len()).collect();
        order.sort_by(|&a, &b| images[a].cmp(&images[b]));
        for w in order.windows(2) {
            if images[w[0]] == images[w[1]] {
                return Err(EtaError::NotInjective {
                    a: w[0].min(w[1]),
                    b: w[0].max(w[1]),
                });
            }
        }
        if reduced_table.len() != table.len() {
            return Err(EtaError::CountMismatch {
                host: table.len(),
                reduced: reduced_table.len(),
            });
        }
        Ok(images)
    }
}

/// Everything segment-related about one graph.
#[derive(Clone, Debug)]
pub struct SegmentAtlas {
    pub core: CyclicCore,
    pub generic: Vec<VertexId>,
    pub path_segments: Vec<Walk>,
    pub cycle_segments: Vec<MultiGraph>,
    pub reduced: ReducedGraph,
    pub components: CycleComponents,
    pub strong_cyclic: bool,
    pub cycle_separable: bool,
    /// Only defined for connected bridgeless graphs.
    pub cactus_free: Option<bool>,
    pub leaf_cycles: Vec<CycleBody>,
}

impl SegmentAtlas {
    pub fn new(g: &MultiGraph, table: &CycleTable) -> Self {
        let core = cyclic_core(g, table);
        let generic = cycle_generic_vertices(g, table, &core);
        let path_segments = path_segments_from(&core.core, &generic);
        let cycle_segments = cycle_segments(g, table);
        let reduced = ReducedGraph::new(&generic, &path_segments);
        let components = cycle_components(g, table);
        let strong_cyclic = components.classes.len() + components.non_core_edges.len() <= 1;
        let leaf_cycles: Vec<CycleBody> = table
            .cycles()
            .iter()
            .filter(|c| segments_in_cycle(&path_segments, c) == 1)
            .cloned()
            .collect();
        let cactus_free = (g.is_connected() && components.bridges.is_empty())
            .then(|| table.len() == 1 || leaf_cycles.is_empty());
        Self {
            core,
            generic,
            path_segments,
            cycle_segments,
            reduced,
            components,
            strong_cyclic,
            cycle_separable: !strong_cyclic,
            cactus_free,
            leaf_cycles,
        }
    }

    /// Bodies of the path segments.
    pub fn path_segment_bodies(&self, g: &MultiGraph) -> Vec<MultiGraph> {
        self.path_segments.iter().map(|w| w.body(g)).collect()
    }

    /// Path segments contained in `c`, in atlas order.
    pub fn segments_of_cycle(&self, c: &CycleBody) -> Vec<usize> {
        (0..self.path_segments.len())
            .filter(|&i| self.path_segments[i].edges().iter().any(|&e| c.contains_edge(e)))
            .collect()
    }
}

/// Certified cyclic dimension or an error.
pub(crate) fn certified_cdim(g: &MultiGraph, table: &CycleTable) -> Result<usize, SegmentError> {
    cdim(g, table, 0, false).value().ok_or(SegmentError::Uncertified)
}

/// A path segment `P` with `G − P` strong cyclic and bridgeless, first in
/// atlas order.
pub fn removable_path_segment(g: &MultiGraph, table: &CycleTable) -> Result<Walk, SegmentError> {
    if !is_strong_cyclic(g, table) {
        return Err(SegmentError::NotStrongCyclic);
    }
    let d = certified_cdim(g, table)?;
    if d < 2 {
        return Err(SegmentError::CdimTooSmall { cdim: d });
    }
    let segments = path_segments(g, table);
    for w in &segments {
        let rest = g.subtract(&w.body(g));
        let rest_table = table.restrict_to(&rest);
        if rest.edge_count() > 0 && rest.is_bridgeless() && is_strong_cyclic(&rest, &rest_table) {
            return Ok(w.clone());
        }
    }
    Err(SegmentError::NoRemovableSegment { tried: segments.len() })
}

/// A strong cyclic subgraph of cyclic dimension `m`, obtained by removing
/// path segments one at a time.
pub fn nested_subgraphs(g: &MultiGraph, table: &CycleTable, m: usize) -> Result<MultiGraph, SegmentError> {
    if !is_strong_cyclic(g, table) {
        return Err(SegmentError::NotStrongCyclic);
    }
    let d = certified_cdim(g, table)?;
    if m == 0 || m > d {
        return Err(SegmentError::DimensionOutOfRange { m, cdim: d });
    }
    let mut cur = g.clone();
    let mut cur_table = table.clone();
    let mut cur_d = d;
    while cur_d > m {
        let w = removable_path_segment(&cur, &cur_table)?;
        cur = cur.subtract(&w.body(&cur));
        cur_table = cur_table.restrict_to(&cur);
        cur_d = certified_cdim(&cur, &cur_table)?;
    }
    Ok(cur)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn setup(edges: &[(u32, u32, u32)]) -> (MultiGraph, CycleTable) {
        let g = MultiGraph::from_edges(edges).unwrap();
        let t = CycleTable::new(&g, 10_000).unwrap();
        (g, t)
    }

    const K4: &[(u32, u32, u32)] = &[(1, 1, 2), (2, 1, 3), (3, 1, 4), (4, 2, 3), (5, 2, 4), (6, 3, 4)];
    const THETA: &[(u32, u32, u32)] = &[(1, 1, 2), (2, 1, 2), (3, 1, 2)];
    const SUB_THETA: &[(u32, u32, u32)] = &[(1, 1, 3), (2, 3, 2), (3, 1, 4), (4, 4, 2), (5, 1, 5), (6, 5, 2)];
    const BOWTIE: &[(u32, u32, u32)] = &[(1, 1, 2), (2, 2, 3), (3, 1, 3), (4, 3, 4), (5, 4, 5), (6, 3, 5)];

    fn edge_sets(ws: &[Walk]) -> Vec<Vec<u32>> {
        ws.iter().map(|w| sorted_edges(w).iter().map(|e| e.0).collect()).collect()
    }

    #[test]
    fn path_segment_examples() {
        let (g, t) = setup(K4);
        assert_eq!(path_segments(&g, &t).len(), 6);
        let (g, t) = setup(SUB_THETA);
        let ps = path_segments(&g, &t);
        assert_eq!(edge_sets(&ps), [[1, 2], [3, 4], [5, 6]]);
        assert!(ps.iter().all(|w| w.start() == VertexId(1) && w.end() == VertexId(2)));
        let c5: Vec<(u32, u32, u32)> = (0..5).map(|i| (i, i, (i + 1) % 5)).collect();
        let (g, t) = setup(&c5);
        assert_eq!(path_segments(&g, &t).len(), 5);
    }

    #[test]
    fn closed_segment_in_bowtie() {
        let (g, t) = setup(BOWTIE);
        let atlas = SegmentAtlas::new(&g, &t);
        assert_eq!(atlas.generic, [VertexId(3)]);
        assert_eq!(edge_sets(&atlas.path_segments), [[1, 2, 3], [4, 5, 6]]);
        assert!(atlas.path_segments.iter().all(|w| w.is_closed()));
        assert_eq!(atlas.components.classes.len(), 2);
        assert!(atlas.cycle_separable);
        assert_eq!(atlas.leaf_cycles.len(), 2);
        assert_eq!(atlas.cactus_free, Some(false));
        assert_eq!(atlas.reduced.graph.edge_count(), 2);
        assert!(atlas.reduced.graph.is_loop(EdgeId(0)));
    }

    #[test]
    fn cycle_segment_examples() {
        let (g, t) = setup(K4);
        let cs = cycle_segments(&g, &t);
        assert_eq!(cs.len(), 6);
        assert!(cs.iter().all(|h| h.edge_count() == 1 && is_cycle_segment(&g, &t, h)));
        let (g, t) = setup(SUB_THETA);
        let cs = cycle_segments(&g, &t);
        assert_eq!(cs.len(), 3);
        for (h, w) in cs.iter().zip(path_segments(&g, &t)) {
            assert_eq!(*h, w.body(&g));
        }
        let (g, t) = setup(THETA);
        assert_eq!(cycle_segments(&g, &t).len(), 3);
        assert!(is_cycle_segment(&g, &t, &g.edge_subgraph([EdgeId(1)])));
        let two = g.edge_subgraph([EdgeId(1), EdgeId(2)]);
        assert!(!is_cycle_segment(&g, &t, &two));
    }

    #[test]
    fn two_edge_cut_is_a_disconnected_cycle_segment() {
        // triangles 1-2-3 and 4-5-6 joined by edges 7 = 1-4 and 8 = 2-5
        let (g, t) = setup(&[
            (1, 1, 2),
            (2, 2, 3),
            (3, 1, 3),
            (4, 4, 5),
            (5, 5, 6),
            (6, 4, 6),
            (7, 1, 4),
            (8, 2, 5),
        ]);
        let cs = cycle_segments(&g, &t);
        assert!(cs.iter().all(|h| is_cycle_segment(&g, &t, h)));
        let cut = cs.iter().find(|h| h.contains_edge(EdgeId(7))).unwrap();
        assert_eq!(cut.edges(), [EdgeId(7), EdgeId(8)]);
        assert_eq!(cut.connected_components().n_with_edge, 2);
    }

    #[test]
    fn segment_may_hold_untouched_vertex() {
        // every cycle through the cut edges 1, 2 passes vertex 9 via one of
        // two parallel pairs
        let (g, t) = setup(&[(1, 1, 2), (2, 3, 4), (3, 1, 3), (4, 1, 3), (5, 2, 9), (6, 2, 9), (7, 9, 4), (8, 9, 4)]);
        let cs = cycle_segments(&g, &t);
        let cut = cs.iter().find(|h| h.contains_edge(EdgeId(1))).unwrap();
        assert_eq!(cut.edges(), [EdgeId(1), EdgeId(2)]);
        assert!(cut.contains_vertex(VertexId(9)));
        assert!(is_cycle_segment(&g, &t, cut));
    }

    #[test]
    fn reduced_graph_examples() {
        let (g, t) = setup(SUB_THETA);
        let atlas = SegmentAtlas::new(&g, &t);
        let r = &atlas.reduced.graph;
        assert_eq!((r.vertex_count(), r.edge_count()), (2, 3));
        assert!(r.edge_triples().all(|(_, u, v)| (u, v) == (VertexId(1), VertexId(2))));
        let rt = CycleTable::new(r, 100).unwrap();
        assert_eq!(atlas.reduced.eta(&t, &rt).unwrap().len(), 3);
        let (g, t) = setup(K4);
        let atlas = SegmentAtlas::new(&g, &t);
        let rt = CycleTable::new(&atlas.reduced.graph, 100).unwrap();
        assert_eq!(atlas.reduced.graph.edge_count(), 6);
        assert!(atlas.reduced.eta(&t, &rt).is_ok());
    }

    #[test]
    fn component_examples() {
        let (g, t) = setup(K4);
        let a = SegmentAtlas::new(&g, &t);
        assert!(a.strong_cyclic);
        assert_eq!(a.cactus_free, Some(true));
        let (g, t) = setup(&[(1, 1, 2), (2, 2, 3), (3, 1, 3)]);
        let a = SegmentAtlas::new(&g, &t);
        assert!(a.strong_cyclic);
        assert_eq!(a.cactus_free, Some(true));
        // all three vertices are generic, so the cycle has three path segments
        assert!(a.leaf_cycles.is_empty());
        let (g, t) = setup(&[(1, 1, 2), (2, 2, 3), (3, 1, 3), (4, 3, 4), (5, 4, 5), (6, 5, 6), (7, 4, 6)]);
        let a = SegmentAtlas::new(&g, &t);
        assert_eq!(a.components.non_core_edges, [EdgeId(4)]);
        assert_eq!(a.components.bridges, [EdgeId(4)]);
        assert!(!a.strong_cyclic);
        assert_eq!(a.cactus_free, None);
    }

    #[test]
    fn removable_segments() {
        let (g, t) = setup(K4);
        let w = removable_path_segment(&g, &t).unwrap();
        assert_eq!(w.len(), 1);
        for &e in g.edges() {
            let rest = g.without_edge(e);
            let rt = t.restrict_to(&rest);
            assert!(is_strong_cyclic(&rest, &rt) && rest.is_bridgeless());
        }
        let (g, t) = setup(THETA);
        assert_eq!(removable_path_segment(&g, &t).unwrap().edges(), [EdgeId(1)]);
        let (g, t) = setup(SUB_THETA);
        let w = removable_path_segment(&g, &t).unwrap();
        assert_eq!(g.subtract(&w.body(&g)).edge_count(), 4);
        let (g, t) = setup(&[(1, 1, 2), (2, 2, 3), (3, 1, 3)]);
        assert_eq!(removable_path_segment(&g, &t), Err(SegmentError::CdimTooSmall { cdim: 1 }));
        let (g, t) = setup(BOWTIE);
        assert_eq!(removable_path_segment(&g, &t), Err(SegmentError::NotStrongCyclic));
    }

    #[test]
    fn nested_examples() {
        let (g, t) = setup(K4);
        assert_eq!(nested_subgraphs(&g, &t, 3).unwrap(), g);
        let one = nested_subgraphs(&g, &t, 1).unwrap();
        let ot = t.restrict_to(&one);
        assert_eq!(ot.len(), 1);
        assert!(one.edge_count() == 3 || one.edge_count() == 4);
        let (g, t) = setup(THETA);
        assert_eq!(nested_subgraphs(&g, &t, 2).unwrap(), g);
        assert_eq!(
            nested_subgraphs(&g, &t, 3),
            Err(SegmentError::DimensionOutOfRange { m: 3, cdim: 2 })
        );
    }
}
