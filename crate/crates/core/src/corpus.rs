//! Exhaustive generation of small connected bridgeless multigraphs and the
//! registry of named graphs.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use thiserror::Error;

use crate::canon::canonical_graph;
use crate::graph::MultiGraph;

/// Largest edge bound accepted for exhaustive generation by default.
pub const DEFAULT_EDGE_LIMIT: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CorpusError {
    #[error("edge bound {max_edges} exceeds the limit {limit}")]
    TooLarge { max_edges: usize, limit: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Provenance {
    Generated,
    Named,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorpusEntry {
    pub name: String,
    pub graph: MultiGraph,
    pub provenance: Provenance,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Corpus {
    pub graphs: Vec<CorpusEntry>,
    pub max_edges: usize,
}

impl Corpus {
    pub fn get(&self, name: &str) -> Option<&MultiGraph> {
        self.graphs.iter().find(|e| e.name == name).map(|e| &e.graph)
    }

    pub fn len(&self) -> usize {
        self.graphs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.graphs.is_empty()
    }
}

/// All pairwise non-isomorphic connected bridgeless multigraphs (loops and
/// parallel edges allowed) with `1..=max_edges` edges, canonically labeled,
/// ordered by edge count then canonical edge list.
///
/// Every such graph has an ear decomposition from a single vertex, so adding
/// one open or closed ear to each graph of the previous levels reaches them
/// all.
pub fn generate_bridgeless(max_edges: usize) -> Vec<MultiGraph> {
    type Level = BTreeMap<Vec<(u32, u32)>, MultiGraph>;
    let mut levels: Vec<Level> = alloc::vec![BTreeMap::new(); max_edges + 1];
    let seed = MultiGraph::from_parts(&[0], &[]).expect("single vertex");
    levels[0].insert(Vec::new(), seed);
    for size in 0..=max_edges {
        let current: Vec<MultiGraph> = levels[size].values().cloned().collect();
        for g in &current {
            for (len, h) in ears(g, max_edges - size) {
                let c = canonical_graph(&h);
                let key = c.edge_triples().map(|(_, u, v)| (u.0, v.0)).collect();
                levels[size + len].entry(key).or_insert(c);
            }
        }
    }
    levels.into_iter().skip(1).flat_map(|l| l.into_values()).collect()
}

/// Graphs obtained by one ear of length `1..=budget`.
fn ears(g: &MultiGraph, budget: usize) -> Vec<(usize, MultiGraph)> {
    let n = g.vertex_count() as u32;
    let m = g.edge_count() as u32;
    let base: Vec<(u32, u32, u32)> = g.edge_triples().map(|(e, u, v)| (e.0, u.0, v.0)).collect();
    let mut out = Vec::new();
    for len in 1..=budget {
        let inner: Vec<u32> = (n..n + len as u32 - 1).collect();
        for a in 0..n {
            for b in a..n {
                let mut path = alloc::vec![a];
                path.extend(&inner);
                path.push(b);
                let mut edges = base.clone();
                edges.extend(path.windows(2).enumerate().map(|(i, w)| (m + i as u32, w[0], w[1])));
                let vertices: Vec<u32> = (0..n + inner.len() as u32).collect();
                out.push((len, MultiGraph::from_parts(&vertices, &edges).expect("valid ear")));
            }
        }
    }
    out
}

fn graph(edges: &[(u32, u32)]) -> MultiGraph {
    let triples: Vec<(u32, u32, u32)> = edges.iter().enumerate().map(|(i, &(u, v))| (i as u32, u, v)).collect();
    MultiGraph::from_edges(&triples).expect("named graph is valid")
}

pub fn cycle_graph(n: u32) -> MultiGraph {
    graph(&(0..n).map(|i| (i, (i + 1) % n)).collect::<Vec<_>>())
}

pub fn complete_graph(n: u32) -> MultiGraph {
    let mut es = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            es.push((a, b));
        }
    }
    graph(&es)
}

pub fn petersen() -> MultiGraph {
    let mut es: Vec<(u32, u32)> = (0..5).map(|i| (i, (i + 1) % 5)).collect();
    es.extend((0..5).map(|i| (i, i + 5)));
    es.extend((0..5).map(|i| (5 + i, 5 + (i + 2) % 5)));
    graph(&es)
}

/// The named graphs, in a fixed order.
pub fn named_graphs() -> Vec<(String, MultiGraph)> {
    let mut out: Vec<(String, MultiGraph)> = Vec::new();
    out.push(("triangle".into(), cycle_graph(3)));
    for n in 2..=8 {
        out.push((format!("C{n}"), cycle_graph(n)));
    }
    out.push(("theta".into(), graph(&[(0, 1), (0, 1), (0, 1)])));
    out.push((
        "subdivided-theta".into(),
        graph(&[(0, 2), (2, 1), (0, 3), (3, 1), (0, 4), (4, 1)]),
    ));
    out.push(("K4".into(), complete_graph(4)));
    out.push(("K5".into(), complete_graph(5)));
    let mut k33 = Vec::new();
    for a in 0..3 {
        for b in 3..6 {
            k33.push((a, b));
        }
    }
    out.push(("K3,3".into(), graph(&k33)));
    out.push(("bowtie".into(), graph(&[(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 2)])));
    out.push((
        "dumbbell".into(),
        graph(&[(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 5), (5, 3)]),
    ));
    out.push((
        "prism".into(),
        graph(&[(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3), (0, 3), (1, 4), (2, 5)]),
    ));
    let mut cube = Vec::new();
    for v in 0u32..8 {
        for bit in [1, 2, 4] {
            if v & bit == 0 {
                cube.push((v, v | bit));
            }
        }
    }
    out.push(("cube".into(), graph(&cube)));
    out.push(("petersen".into(), petersen()));
    out
}

/// Exhaustive tier up to `max_edges` (refused above `limit`) plus the named
/// graphs when requested.
pub fn corpus_generate(max_edges: usize, include_named: bool, limit: usize) -> Result<Corpus, CorpusError> {
    if max_edges > limit {
        return Err(CorpusError::TooLarge { max_edges, limit });
    }
    let mut graphs: Vec<CorpusEntry> = Vec::new();
    let mut per_size: BTreeMap<usize, usize> = BTreeMap::new();
    for g in generate_bridgeless(max_edges) {
        let k = per_size.entry(g.edge_count()).or_insert(0);
        graphs.push(CorpusEntry {
            name: format!("gen-e{}-{:05}", g.edge_count(), k),
            graph: g,
            provenance: Provenance::Generated,
        });
        *k += 1;
    }
    if include_named {
        graphs.extend(named_graphs().into_iter().map(|(name, graph)| CorpusEntry {
            name,
            graph,
            provenance: Provenance::Named,
        }));
    }
    Ok(Corpus { graphs, max_edges })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canon::is_isomorphic;

    #[test]
    fn small_levels() {
        let gs = generate_bridgeless(3);
        let count = |k: usize| gs.iter().filter(|g| g.edge_count() == k).count();
        // loop; digon and two loops; triangle, theta, three loops, digon with a loop
        assert_eq!((count(1), count(2), count(3)), (1, 2, 4));
        assert!(gs.iter().all(|g| g.is_connected() && g.is_bridgeless()));
        assert!(gs.iter().any(|g| is_isomorphic(g, &cycle_graph(3))));
        assert!(gs.iter().any(|g| is_isomorphic(g, &graph(&[(0, 1), (0, 1), (0, 1)]))));
        for (i, a) in gs.iter().enumerate() {
            for b in &gs[i + 1..] {
                assert!(!is_isomorphic(a, b));
            }
        }
    }

    #[test]
    fn named_registry() {
        let c = corpus_generate(0, true, DEFAULT_EDGE_LIMIT).unwrap();
        assert_eq!(c.get("petersen").unwrap().edge_count(), 15);
        assert!(c.graphs.iter().all(|e| e.provenance == Provenance::Named));
        assert!(corpus_generate(0, false, DEFAULT_EDGE_LIMIT).unwrap().is_empty());
        assert_eq!(
            corpus_generate(13, false, DEFAULT_EDGE_LIMIT),
            Err(CorpusError::TooLarge { max_edges: 13, limit: 12 })
        );
    }
}
