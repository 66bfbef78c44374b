//! Exhaustive search for a cycle double cover containing a given cycle.

use alloc::vec::Vec;

use thiserror::Error;

use crate::cycles::{CycleBody, CycleTable};
use crate::goddyn::{verify_cover, CoverCertificate, CoverSource};
use crate::graph::{EdgeId, MultiGraph};

/// Default cap on the number of cycles the oracle accepts.
pub const DEFAULT_ORACLE_CAP: usize = 60;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("graph has bridges {}; no cycle double cover exists", crate::graph::id_list(.0))]
    HasBridge(Vec<EdgeId>),
    #[error("{cycles} cycles exceed the oracle cap of {cap}")]
    CapExceeded { cycles: usize, cap: usize },
    #[error("required cycle is not a cycle of the graph")]
    NotACycle,
}

/// A verified cover, or `None` after the whole space was exhausted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleResult {
    pub cover: Option<CoverCertificate>,
    pub nodes: u64,
}

impl OracleResult {
    pub fn is_exhaustive_none(&self) -> bool {
        self.cover.is_none()
    }
}

/// Depth-first search over cycle multiplicities.
///
/// Every edge needs demand 2. At each node the open edge with the fewest
/// fitting cycles is chosen and every multiset of fitting cycles of the
/// edge's remaining demand is tried, so each cover is reached once.
pub fn oracle_cdc(
    g: &MultiGraph,
    table: &CycleTable,
    required: Option<&CycleBody>,
    cap: usize,
) -> Result<OracleResult, OracleError> {
    let bridges = g.bridges();
    if !bridges.is_empty() {
        return Err(OracleError::HasBridge(bridges));
    }
    if table.len() > cap {
        return Err(OracleError::CapExceeded {
            cycles: table.len(),
            cap,
        });
    }
    let m = g.edge_count();
    let cyc_edges: Vec<Vec<usize>> = (0..table.len()).map(|c| table.edge_mask(c).ones().collect()).collect();
    let mut demand = alloc::vec![2u8; m];
    let mut chosen: Vec<usize> = Vec::new();
    if let Some(r) = required {
        let ri = table.index_of(r).ok_or(OracleError::NotACycle)?;
        cyc_edges[ri].iter().for_each(|&e| demand[e] -= 1);
        chosen.push(ri);
    }
    let mut search = Search {
        table,
        cyc_edges: &cyc_edges,
        demand,
        chosen,
        nodes: 0,
    };
    let found = search.run();
    let cover = if found {
        let mut ids = search.chosen.clone();
        let head = usize::from(required.is_some());
        ids[head..].sort_unstable();
        let cycles: Vec<CycleBody> = ids.iter().map(|&i| table.cycles()[i].clone()).collect();
        let cert = verify_cover(g, &cycles, required, CoverSource::Oracle).expect("members come from the table");
        Some(cert)
    } else {
        None
    };
    Ok(OracleResult {
        cover,
        nodes: search.nodes,
    })
}

struct Search<'a> {
    table: &'a CycleTable,
    cyc_edges: &'a [Vec<usize>],
    demand: Vec<u8>,
    chosen: Vec<usize>,
    nodes: u64,
}

impl Search<'_> {
    fn fits(&self, c: usize, times: u8) -> bool {
        self.cyc_edges[c].iter().all(|&e| self.demand[e] >= times)
    }

    fn apply(&mut self, c: usize, sign: i8) {
        for &e in &self.cyc_edges[c] {
            if sign > 0 {
                self.demand[e] -= 1;
            } else {
                self.demand[e] += 1;
            }
        }
    }

    fn run(&mut self) -> bool {
        self.nodes += 1;
        let mut best: Option<(usize, Vec<usize>)> = None;
        for e in 0..self.demand.len() {
            if self.demand[e] == 0 {
                continue;
            }
            let cands: Vec<usize> = self.table.through_edge(e).ones().filter(|&c| self.fits(c, 1)).collect();
            if cands.is_empty() {
                return false;
            }
            if best.as_ref().map_or(true, |(_, b)| cands.len() < b.len()) {
                best = Some((e, cands));
            }
        }
        let Some((e, cands)) = best else {
            return true;
        };
        if self.demand[e] == 1 {
            for &c in &cands {
                self.apply(c, 1);
                self.chosen.push(c);
                if self.run() {
                    return true;
                }
                self.chosen.pop();
                self.apply(c, -1);
            }
            return false;
        }
        for (i, &a) in cands.iter().enumerate() {
            for &b in &cands[i..] {
                if a == b && !self.fits(a, 2) {
                    continue;
                }
                self.apply(a, 1);
                if !self.fits(b, 1) {
                    self.apply(a, -1);
                    continue;
                }
                self.apply(b, 1);
                self.chosen.push(a);
                self.chosen.push(b);
                if self.run() {
                    return true;
                }
                self.chosen.truncate(self.chosen.len() - 2);
                self.apply(b, -1);
                self.apply(a, -1);
            }
        }
        false
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn setup(edges: &[(u32, u32, u32)]) -> (MultiGraph, CycleTable) {
        let g = MultiGraph::from_edges(edges).unwrap();
        let t = CycleTable::new(&g, 10_000).unwrap();
        (g, t)
    }

    #[test]
    fn triangle_is_covered_twice() {
        let (g, t) = setup(&[(1, 1, 2), (2, 2, 3), (3, 1, 3)]);
        let c = t.cycles()[0].clone();
        let r = oracle_cdc(&g, &t, Some(&c), DEFAULT_ORACLE_CAP).unwrap();
        let cover = r.cover.unwrap();
        assert_eq!(cover.cycles, [c.clone(), c]);
        assert!(cover.passes());
    }

    #[test]
    fn every_k4_cycle_is_in_a_cover() {
        let (g, t) = setup(&[(1, 1, 2), (2, 1, 3), (3, 1, 4), (4, 2, 3), (5, 2, 4), (6, 3, 4)]);
        for c in t.cycles() {
            let r = oracle_cdc(&g, &t, Some(c), DEFAULT_ORACLE_CAP).unwrap();
            let cover = r.cover.unwrap();
            assert!(cover.passes());
            assert_eq!(&cover.cycles[0], c);
        }
    }

    #[test]
    fn rejections() {
        let (g, t) = setup(&[(1, 1, 2), (2, 2, 3), (3, 1, 3), (4, 3, 4), (5, 4, 5), (6, 5, 6), (7, 4, 6)]);
        assert_eq!(
            oracle_cdc(&g, &t, None, DEFAULT_ORACLE_CAP),
            Err(OracleError::HasBridge(alloc::vec![EdgeId(4)]))
        );
        let (g, t) = setup(&[(1, 1, 2), (2, 1, 2), (3, 1, 2)]);
        assert_eq!(
            oracle_cdc(&g, &t, None, 2),
            Err(OracleError::CapExceeded { cycles: 3, cap: 2 })
        );
    }

    #[test]
    fn loops_and_no_required_cycle() {
        let (g, t) = setup(&[(1, 1, 1), (2, 1, 2), (3, 1, 2)]);
        let r = oracle_cdc(&g, &t, None, DEFAULT_ORACLE_CAP).unwrap();
        assert!(r.cover.unwrap().passes());
    }
}
