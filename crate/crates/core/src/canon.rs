//! Canonical labeling of multigraphs by partition refinement and
//! individualization.

use alloc::vec::Vec;

use crate::graph::{MultiGraph, VertexId};

/// Canonical code plus the vertex order that produced it.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalForm {
    /// Vertex count followed by the upper triangle (diagonal included) of the
    /// multiplicity matrix in canonical order; loops count once.
    pub code: Vec<u32>,
    /// `order[i]` is the original vertex placed at position `i`.
    pub order: Vec<VertexId>,
}

fn multiplicities(g: &MultiGraph) -> Vec<Vec<u32>> {
    let n = g.vertex_count();
    let mut m = alloc::vec![alloc::vec![0u32; n]; n];
    for (_, u, v) in g.edge_triples() {
        let (a, b) = (g.vertex_index(u).unwrap(), g.vertex_index(v).unwrap());
        m[a][b] += 1;
        if a != b {
            m[b][a] += 1;
        }
    }
    m
}

/// Refines an ordered partition (cell index per vertex) until equitable.
/// New cells are ordered by old cell, then by the sorted multiset of
/// `(neighbour cell, multiplicity)`, so the result does not depend on the
/// input labeling.
fn refine(m: &[Vec<u32>], cells: &mut Vec<usize>) {
    let n = m.len();
    loop {
        let mut keys: Vec<(usize, Vec<(usize, u32)>, usize)> = (0..n)
            .map(|v| {
                let mut sig: Vec<(usize, u32)> = (0..n).filter(|&w| m[v][w] > 0).map(|w| (cells[w], m[v][w])).collect();
                sig.sort_unstable();
                (cells[v], sig, v)
            })
            .collect();
        keys.sort();
        let mut next = alloc::vec![0usize; n];
        let mut idx = 0;
        for i in 0..n {
            if i > 0 && (keys[i].0 != keys[i - 1].0 || keys[i].1 != keys[i - 1].1) {
                idx = i;
            }
            next[keys[i].2] = idx;
        }
        if next == *cells {
            return;
        }
        *cells = next;
    }
}

fn code_of(m: &[Vec<u32>], order: &[usize]) -> Vec<u32> {
    let n = order.len();
    let mut code = Vec::with_capacity(1 + n * (n + 1) / 2);
    code.push(n as u32);
    for i in 0..n {
        for j in i..n {
            code.push(m[order[i]][order[j]]);
        }
    }
    code
}

fn search(m: &[Vec<u32>], cells: Vec<usize>, best: &mut Option<(Vec<u32>, Vec<usize>)>) {
    let n = m.len();
    let mut counts = alloc::vec![0usize; n];
    cells.iter().for_each(|&c| counts[c] += 1);
    let target = (0..n).find(|&c| counts[c] > 1);
    let Some(target) = target else {
        let mut order = alloc::vec![0usize; n];
        for (v, &c) in cells.iter().enumerate() {
            order[c] = v;
        }
        let code = code_of(m, &order);
        if best.as_ref().map_or(true, |(b, _)| code < *b) {
            *best = Some((code, order));
        }
        return;
    };
    for v in (0..n).filter(|&v| cells[v] == target) {
        let mut c = cells.clone();
        // v keeps index `target`, the rest of its cell moves up by one
        for (w, cw) in c.iter_mut().enumerate() {
            if *cw == target && w != v {
                *cw = target + 1;
            }
        }
        refine(m, &mut c);
        search(m, c, best);
    }
}

pub fn canonical_form(g: &MultiGraph) -> CanonicalForm {
    let m = multiplicities(g);
    let n = m.len();
    if n == 0 {
        return CanonicalForm {
            code: alloc::vec![0],
            order: Vec::new(),
        };
    }
    let mut cells = alloc::vec![0usize; n];
    refine(&m, &mut cells);
    let mut best = None;
    search(&m, cells, &mut best);
    let (code, order) = best.expect("at least one leaf");
    CanonicalForm {
        code,
        order: order.into_iter().map(|i| g.vertices()[i]).collect(),
    }
}

/// The canonical representative: vertices `0..n` in canonical order and
/// edges numbered `0..m` by sorted endpoint pair.
pub fn canonical_graph(g: &MultiGraph) -> MultiGraph {
    let form = canonical_form(g);
    let pos = |v: VertexId| form.order.iter().position(|&x| x == v).unwrap() as u32;
    let mut pairs: Vec<(u32, u32)> = g
        .edge_triples()
        .map(|(_, u, v)| {
            let (a, b) = (pos(u), pos(v));
            (a.min(b), a.max(b))
        })
        .collect();
    pairs.sort_unstable();
    let edges: Vec<(u32, u32, u32)> = pairs.iter().enumerate().map(|(i, &(a, b))| (i as u32, a, b)).collect();
    let vertices: Vec<u32> = (0..g.vertex_count() as u32).collect();
    MultiGraph::from_parts(&vertices, &edges).expect("relabeled graph is valid")
}

pub fn is_isomorphic(a: &MultiGraph, b: &MultiGraph) -> bool {
    a.vertex_count() == b.vertex_count()
        && a.edge_count() == b.edge_count()
        && canonical_form(a).code == canonical_form(b).code
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn relabeled_graphs_share_a_code() {
        let a = MultiGraph::from_edges(&[(1, 1, 2), (2, 2, 3), (3, 3, 1), (4, 3, 4), (5, 4, 4)]).unwrap();
        let b = MultiGraph::from_edges(&[(9, 7, 8), (8, 8, 5), (7, 5, 7), (6, 5, 6), (5, 6, 6)]).unwrap();
        assert!(is_isomorphic(&a, &b));
        assert_eq!(canonical_graph(&a), canonical_graph(&b));
        let c = MultiGraph::from_edges(&[(1, 1, 2), (2, 2, 3), (3, 3, 1), (4, 3, 4), (5, 3, 3)]).unwrap();
        assert!(!is_isomorphic(&a, &c));
    }

    #[test]
    fn regular_graphs_need_individualization() {
        // hexagon versus two triangles: same degrees, refinement alone stalls
        let hex: Vec<(u32, u32, u32)> = (0..6).map(|i| (i, i, (i + 1) % 6)).collect();
        let two = [(0, 0, 1), (1, 1, 2), (2, 2, 0), (3, 3, 4), (4, 4, 5), (5, 5, 3)];
        let h = MultiGraph::from_edges(&hex).unwrap();
        let t = MultiGraph::from_edges(&two).unwrap();
        assert!(!is_isomorphic(&h, &t));
        let h2: Vec<(u32, u32, u32)> = (0..6).map(|i| (i, (i * 5) % 6, (i * 5 + 5) % 6)).collect();
        assert!(is_isomorphic(&h, &MultiGraph::from_edges(&h2).unwrap()));
    }
}
