//! Claim registry and the per-graph audit with replayable counterexamples.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use fixedbitset::FixedBitSet;

use crate::corpus::CorpusEntry;
use crate::cycles::{CycleBody, CycleTable, DEFAULT_MAX_CYCLES};
use crate::goddyn::{assemble_cover, find_companion_cycle, goddyn_construct, BuilderOptions, Outcome};
use crate::graph::{EdgeId, MultiGraph, VertexId};
use crate::linalg::rank_of;
use crate::oracle::{oracle_cdc, DEFAULT_ORACLE_CAP};
use crate::segments::{is_strong_cyclic, nested_subgraphs, path_segments, SegmentAtlas};
use crate::signlab::{cdim, parallel_restriction_check, CdimCertificate, SignLabeling, DEFAULT_BRUTE_FORCE_INCIDENCES};
use crate::walk::Walk;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ClaimId {
    P31i,
    P31ii,
    P31iii,
    P31iv,
    P31v,
    P31vi,
    P31viii,
    P31ix,
    P321,
    P322,
    P323,
    P324,
    P325,
    P326,
    P327,
    P328,
    P329,
    P3210,
    P3211,
    CorDegc,
    CorSegcomp,
    ThmGoddyn,
}

impl ClaimId {
    pub const ALL: [ClaimId; 22] = [
        ClaimId::P31i,
        ClaimId::P31ii,
        ClaimId::P31iii,
        ClaimId::P31iv,
        ClaimId::P31v,
        ClaimId::P31vi,
        ClaimId::P31viii,
        ClaimId::P31ix,
        ClaimId::P321,
        ClaimId::P322,
        ClaimId::P323,
        ClaimId::P324,
        ClaimId::P325,
        ClaimId::P326,
        ClaimId::P327,
        ClaimId::P328,
        ClaimId::P329,
        ClaimId::P3210,
        ClaimId::P3211,
        ClaimId::CorDegc,
        ClaimId::CorSegcomp,
        ClaimId::ThmGoddyn,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ClaimId::P31i => "P3.1.i",
            ClaimId::P31ii => "P3.1.ii",
            ClaimId::P31iii => "P3.1.iii",
            ClaimId::P31iv => "P3.1.iv",
            ClaimId::P31v => "P3.1.v",
            ClaimId::P31vi => "P3.1.vi",
            ClaimId::P31viii => "P3.1.viii",
            ClaimId::P31ix => "P3.1.ix",
            ClaimId::P321 => "P3.2.1",
            ClaimId::P322 => "P3.2.2",
            ClaimId::P323 => "P3.2.3",
            ClaimId::P324 => "P3.2.4",
            ClaimId::P325 => "P3.2.5",
            ClaimId::P326 => "P3.2.6",
            ClaimId::P327 => "P3.2.7",
            ClaimId::P328 => "P3.2.8",
            ClaimId::P329 => "P3.2.9",
            ClaimId::P3210 => "P3.2.10",
            ClaimId::P3211 => "P3.2.11",
            ClaimId::CorDegc => "COR.degc",
            ClaimId::CorSegcomp => "COR.segcomp",
            ClaimId::ThmGoddyn => "THM.goddyn",
        }
    }

    pub fn parse(s: &str) -> Option<ClaimId> {
        ClaimId::ALL.into_iter().find(|c| c.as_str() == s)
    }

    pub fn statement(self) -> &'static str {
        match self {
            ClaimId::P31i => "cdim(G - G(w)) < cdim(G) for every path segment w",
            ClaimId::P31ii => "maximal pieces of a path sharing an edge have equal bodies",
            ClaimId::P31iii => "common vertices of any family of cycles include a cycle generic vertex",
            ClaimId::P31iv => "distinct path segments share only generic vertices and no edge; a segment meeting a cycle lies in it",
            ClaimId::P31v => "cdim(G_c) = cdim(G^c) = cdim(G), with eta a bijection",
            ClaimId::P31vi => "restrictions of f(C1), f(C2) to connected parts of C1 and C2 are parallel",
            ClaimId::P31viii => "an optimal labeling restricts to an optimal labeling of every subgraph",
            ClaimId::P31ix => "cdim(G) = 1 + cdim(G - G(w)) for every path segment w",
            ClaimId::P321 => "edge-disjoint path segment P and cycle segment H admit a cycle containing P but not H",
            ClaimId::P322 => "G - H is bridgeless for every cycle segment H",
            ClaimId::P323 => "for a disconnected cycle segment H, each component of G - H holds at most one component of C - H",
            ClaimId::P324 => "N0(H) = N(G - H) for every cycle segment H of a strong cyclic graph",
            ClaimId::P325 => "a strong cyclic graph has at most one disconnected cycle segment",
            ClaimId::P326 => "a strong cyclic graph has a path P with G - P strong cyclic",
            ClaimId::P327 => "a strong cyclic graph has strong cyclic subgraphs of every cdim 1..=cdim(G)",
            ClaimId::P328 => "with cdim >= 3, every cycle avoids some path segment P with G - P connected and bridgeless",
            ClaimId::P329 => "at most 4 cycle segments H keep G(w) in G - H while w stops being a path segment",
            ClaimId::P3210 => "in a cactus-free graph every cycle segment H in a cycle C equals C and C0 intersected, for some C0",
            ClaimId::P3211 => "an f-generator starting at C with characteristic map at most 2 and telescoping partial sums exists",
            ClaimId::CorDegc => "sum over core vertices of (degc - 2) equals 2(cdim - 1)",
            ClaimId::CorSegcomp => "each component of a cycle segment of a strong cyclic graph is a vertex or one path segment",
            ClaimId::ThmGoddyn => "the segment-removal construction yields a cycle double cover containing C",
        }
    }
}

/// Claims registered but not executed, with the reason.
pub const OUT_OF_SCOPE: [(&str, &str); 1] = [(
    "P3.1.vii",
    "constructive labeling of paths with equal endpoints is not synthesized; out of scope",
)];

/// Interpretations applied by the checks, emitted in the report header.
pub const READINGS: [(&str, &str); 6] = [
    ("P3.2.1", "P and H are required to share no edge; H = G(P) is excluded"),
    ("P3.2.3", "a cycle segment is disconnected when it has two or more components with an edge; isolated vertices are ignored"),
    ("P3.2.6", "path segments are searched first, then every simple path"),
    ("P3.2.10", "equality of C and C0 intersected with H is accepted up to isolated vertices when no exact match exists"),
    ("P3.2.11", "searched independently of the builder, for the orientation labeling and one re-signed optimal labeling"),
    ("COR.degc", "checked on connected graphs with at least one cycle"),
];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AuditConfig {
    pub max_cycles: usize,
    pub brute_force_cap: usize,
    pub oracle_cap: usize,
    /// Edge bound for exhaustive subgraph sweeps (P3.1.viii, P3.2.7 fallback).
    pub subset_edge_limit: usize,
    /// Cap on simple paths examined per graph.
    pub path_cap: usize,
    pub run_oracle: bool,
    pub exhaustive_builder: bool,
}

impl Default for AuditConfig {
    fn default() -> Self {
        Self {
            max_cycles: DEFAULT_MAX_CYCLES,
            brute_force_cap: DEFAULT_BRUTE_FORCE_INCIDENCES,
            oracle_cap: DEFAULT_ORACLE_CAP,
            subset_edge_limit: 12,
            path_cap: 2000,
            run_oracle: true,
            exhaustive_builder: false,
        }
    }
}

/// What a single check was run on.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord)]
pub struct Instance {
    pub edge_sets: Vec<Vec<EdgeId>>,
    pub walk: Option<Walk>,
    pub vertices: Vec<VertexId>,
    pub param: Option<usize>,
}

impl Instance {
    fn sets(sets: Vec<Vec<EdgeId>>) -> Self {
        Self {
            edge_sets: sets,
            ..Self::default()
        }
    }

    fn with_param(mut self, p: usize) -> Self {
        self.param = Some(p);
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Status {
    Pass,
    Fail,
    NotApplicable,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Counterexample {
    pub claim: ClaimId,
    pub graph: MultiGraph,
    pub instance: Instance,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AuditRecord {
    pub graph: String,
    pub claim: ClaimId,
    pub status: Status,
    pub instances: usize,
    pub failing: usize,
    pub note: Option<String>,
    pub witness: Option<Instance>,
    pub counterexample: Option<Counterexample>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OracleStatus {
    Found,
    ExhaustiveNone,
    Skipped(String),
}

/// A `(graph, cycle)` pair where the builder did not produce a passing cover.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Discrepancy {
    pub graph: String,
    pub cycle: Vec<EdgeId>,
    pub builder: String,
    pub oracle: OracleStatus,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GraphAudit {
    pub records: Vec<AuditRecord>,
    pub discrepancies: Vec<Discrepancy>,
    /// Builder passes where the oracle proved that no cover exists.
    pub contradictions: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ClaimSummary {
    pub graphs_applicable: usize,
    pub instances: usize,
    pub pass: usize,
    pub fail: usize,
    pub not_applicable: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AuditReport {
    pub graphs: usize,
    pub records: Vec<AuditRecord>,
    pub discrepancies: Vec<Discrepancy>,
    pub contradictions: usize,
}

impl AuditReport {
    /// Merges per-graph audits in corpus order.
    pub fn from_parts(parts: Vec<GraphAudit>) -> Self {
        let mut out = AuditReport {
            graphs: parts.len(),
            ..Self::default()
        };
        for p in parts {
            out.records.extend(p.records);
            out.discrepancies.extend(p.discrepancies);
            out.contradictions += p.contradictions;
        }
        out
    }

    pub fn has_findings(&self) -> bool {
        self.records.iter().any(|r| r.status == Status::Fail)
    }

    pub fn summary(&self) -> BTreeMap<ClaimId, ClaimSummary> {
        let mut out: BTreeMap<ClaimId, ClaimSummary> = ClaimId::ALL.iter().map(|&c| (c, ClaimSummary::default())).collect();
        for r in &self.records {
            let s = out.get_mut(&r.claim).expect("registered claim");
            match r.status {
                Status::Pass => s.pass += 1,
                Status::Fail => s.fail += 1,
                Status::NotApplicable => s.not_applicable += 1,
            }
            if r.status != Status::NotApplicable {
                s.graphs_applicable += 1;
                s.instances += r.instances;
            }
        }
        out
    }
}

/// Everything the checks need about one graph.
pub struct Context {
    pub graph: MultiGraph,
    pub table: CycleTable,
    pub atlas: SegmentAtlas,
    pub cert: CdimCertificate,
    pub cdim: Option<usize>,
    /// Optimal labelings: the orientation labeling and a re-signed copy.
    pub labelings: Vec<SignLabeling>,
    pub connected: bool,
    pub bridgeless: bool,
}

impl Context {
    pub fn new(g: &MultiGraph, config: &AuditConfig) -> Result<Self, String> {
        let table = CycleTable::new(g, config.max_cycles).map_err(|e| format!("{e}"))?;
        let atlas = SegmentAtlas::new(g, &table);
        let cert = cdim(g, &table, config.brute_force_cap, false);
        let value = cert.value();
        let mut labelings = Vec::new();
        if value == Some(cert.upper_bound) {
            let f = cert.witness.clone();
            let mut h = f.clone();
            for (i, &e) in g.edges().iter().enumerate() {
                if i % 3 == 0 {
                    h = h.with_flipped_edge(e);
                }
            }
            for ci in (1..table.len()).step_by(2) {
                h = h.with_flipped_cycle(ci);
            }
            labelings.push(f);
            labelings.push(h);
        }
        Ok(Self {
            graph: g.clone(),
            connected: g.is_connected(),
            bridgeless: g.is_bridgeless(),
            table,
            atlas,
            cdim: value,
            cert,
            labelings,
        })
    }

    fn sub_cdim(&self, sub: &MultiGraph) -> Option<usize> {
        let t = self.table.restrict_to(sub);
        cdim(sub, &t, 0, false).value()
    }

    fn segment_by_edges(&self, es: &[EdgeId]) -> Option<&Walk> {
        self.atlas.path_segments.iter().find(|w| sorted(w.edges()) == es)
    }

    fn cycle_segment_by_edges(&self, es: &[EdgeId]) -> Option<&MultiGraph> {
        self.atlas.cycle_segments.iter().find(|h| h.edges() == es)
    }

    fn cycle_by_edges(&self, es: &[EdgeId]) -> Option<&CycleBody> {
        self.table.index_of_edges(es).map(|i| &self.table.cycles()[i])
    }
}

fn sorted(es: &[EdgeId]) -> Vec<EdgeId> {
    let mut v = es.to_vec();
    v.sort_unstable();
    v
}

enum Check {
    Holds(Option<Instance>),
    Violated(String),
}

fn holds(b: bool, detail: impl FnOnce() -> String) -> Check {
    if b {
        Check::Holds(None)
    } else {
        Check::Violated(detail())
    }
}

/// Precondition of a claim on a graph.
fn gate(claim: ClaimId, ctx: &Context) -> Result<(), &'static str> {
    use ClaimId::*;
    let d = ctx.cdim.ok_or("cyclic dimension not certified")?;
    match claim {
        P31i | P31ii | P31iii | P31iv | P31v | P31ix => Ok(()),
        P31vi | P31viii => {
            if ctx.labelings.is_empty() {
                Err("no certified optimal labeling")
            } else {
                Ok(())
            }
        }
        CorDegc => {
            if !ctx.connected {
                Err("graph is not connected")
            } else if ctx.table.is_empty() {
                Err("graph has no cycle")
            } else {
                Ok(())
            }
        }
        ThmGoddyn => {
            if !ctx.connected || !ctx.bridgeless {
                Err("graph is not connected and bridgeless")
            } else if ctx.table.is_empty() {
                Err("graph has no cycle")
            } else {
                Ok(())
            }
        }
        _ => {
            if !ctx.connected || !ctx.bridgeless {
                return Err("graph is not connected and bridgeless");
            }
            if d < 2 {
                return Err("cdim < 2");
            }
            match claim {
                P328 if d < 3 => Err("cdim < 3"),
                P324 | P325 | P326 | P327 | P3211 | CorSegcomp if !ctx.atlas.strong_cyclic => Err("graph is not strong cyclic"),
                P3210 if ctx.atlas.cactus_free != Some(true) => Err("graph is not cactus-free"),
                P3211 if ctx.labelings.is_empty() => Err("no certified optimal labeling"),
                _ => Ok(()),
            }
        }
    }
}

/// Simple paths with at least `min_len` edges, each once (start ≤ end,
/// closed paths excluded), in discovery order, at most `cap` of them.
pub fn simple_paths(g: &MultiGraph, min_len: usize, cap: usize) -> (Vec<Walk>, bool) {
    let adj = g.adjacency();
    let n = g.vertex_count();
    let mut out = Vec::new();
    let mut truncated = false;
    let mut on = alloc::vec![false; n];
    for s in 0..n {
        let mut vs = alloc::vec![s];
        let mut es: Vec<usize> = Vec::new();
        on[s] = true;
        extend_paths(g, &adj, &mut on, &mut vs, &mut es, min_len, cap, &mut out, &mut truncated);
        on[s] = false;
        if truncated {
            break;
        }
    }
    (out, truncated)
}

#[allow(clippy::too_many_arguments)]
fn extend_paths(
    g: &MultiGraph,
    adj: &[Vec<(usize, usize)>],
    on: &mut [bool],
    vs: &mut Vec<usize>,
    es: &mut Vec<usize>,
    min_len: usize,
    cap: usize,
    out: &mut Vec<Walk>,
    truncated: &mut bool,
) {
    let at = *vs.last().unwrap();
    if es.len() >= min_len && vs[0] < at {
        if out.len() == cap {
            *truncated = true;
            return;
        }
        out.push(
            Walk::new(
                vs.iter().map(|&i| g.vertices()[i]).collect(),
                es.iter().map(|&i| g.edges()[i]).collect(),
            )
            .expect("alternating"),
        );
    }
    for &(e, w) in &adj[at] {
        if on[w] || *truncated {
            continue;
        }
        on[w] = true;
        vs.push(w);
        es.push(e);
        extend_paths(g, adj, on, vs, es, min_len, cap, out, truncated);
        es.pop();
        vs.pop();
        on[w] = false;
    }
}

fn n0(g: &MultiGraph) -> usize {
    g.connected_components().n_with_edge
}

/// Connected edge subsets of `g`, or single-edge deletions above the limit.
fn subgraph_sweep(g: &MultiGraph, limit: usize) -> Vec<Vec<EdgeId>> {
    let m = g.edge_count();
    if m > limit {
        return g.edges().iter().map(|&e| g.edges().iter().copied().filter(|&x| x != e).collect()).collect();
    }
    let mut out = Vec::new();
    for mask in 1u32..(1u32 << m) {
        let es: Vec<EdgeId> = (0..m).filter(|&i| mask >> i & 1 == 1).map(|i| g.edges()[i]).collect();
        if g.edge_subgraph(es.iter().copied()).is_connected() {
            out.push(es);
        }
    }
    out
}

fn instances(claim: ClaimId, ctx: &Context, config: &AuditConfig) -> (Vec<Instance>, Option<String>) {
    use ClaimId::*;
    let g = &ctx.graph;
    let segs: Vec<Vec<EdgeId>> = ctx.atlas.path_segments.iter().map(|w| sorted(w.edges())).collect();
    let csegs: Vec<Vec<EdgeId>> = ctx.atlas.cycle_segments.iter().map(|h| h.edges().to_vec()).collect();
    let cycles: Vec<Vec<EdgeId>> = ctx.table.cycles().iter().map(|c| c.edges().to_vec()).collect();
    let nl = ctx.labelings.len();
    let mut note = None;
    let list = match claim {
        P31i | P31ix | P329 => segs.iter().map(|s| Instance::sets(alloc::vec![s.clone()])).collect(),
        P31ii => {
            let (paths, truncated) = simple_paths(g, 2, config.path_cap);
            if truncated {
                note = Some(format!("first {} paths examined", config.path_cap));
            }
            paths
                .into_iter()
                .map(|w| Instance {
                    walk: Some(w),
                    ..Instance::default()
                })
                .collect()
        }
        P31iii => {
            let mut seen: BTreeMap<Vec<usize>, Vec<usize>> = BTreeMap::new();
            let mut frontier: Vec<(FixedBitSet, Vec<usize>)> = Vec::new();
            for c in 0..ctx.table.len() {
                let m = ctx.table.vertex_mask(c).clone();
                let key: Vec<usize> = m.ones().collect();
                if !seen.contains_key(&key) {
                    seen.insert(key, alloc::vec![c]);
                    frontier.push((m, alloc::vec![c]));
                }
            }
            while let Some((m, fam)) = frontier.pop() {
                for c in 0..ctx.table.len() {
                    let mut x = m.clone();
                    x.intersect_with(ctx.table.vertex_mask(c));
                    let key: Vec<usize> = x.ones().collect();
                    if key.is_empty() || seen.contains_key(&key) {
                        continue;
                    }
                    let mut f2 = fam.clone();
                    f2.push(c);
                    seen.insert(key, f2.clone());
                    frontier.push((x, f2));
                }
            }
            seen.into_values()
                .map(|fam| Instance::sets(fam.into_iter().map(|c| cycles[c].clone()).collect()))
                .collect()
        }
        P31iv => {
            let mut v = Vec::new();
            for i in 0..segs.len() {
                for j in i + 1..segs.len() {
                    v.push(Instance::sets(alloc::vec![segs[i].clone(), segs[j].clone()]).with_param(0));
                }
                for c in &cycles {
                    v.push(Instance::sets(alloc::vec![segs[i].clone(), c.clone()]).with_param(1));
                }
            }
            v
        }
        P31v | P325 | P326 | CorDegc => {
            if ctx.table.is_empty() && claim == P31v {
                Vec::new()
            } else {
                alloc::vec![Instance::default()]
            }
        }
        P31vi => {
            let mut v = Vec::new();
            for a in 0..cycles.len() {
                for b in a + 1..cycles.len() {
                    if !ctx.table.edge_mask(a).is_disjoint(ctx.table.edge_mask(b)) {
                        for l in 0..nl {
                            v.push(Instance::sets(alloc::vec![cycles[a].clone(), cycles[b].clone()]).with_param(l));
                        }
                    }
                }
            }
            v
        }
        P31viii => {
            if g.edge_count() > config.subset_edge_limit {
                note = Some(String::from("single-edge deletions only"));
            }
            let mut v = Vec::new();
            for es in subgraph_sweep(g, config.subset_edge_limit) {
                for l in 0..nl {
                    v.push(Instance::sets(alloc::vec![es.clone()]).with_param(l));
                }
            }
            v
        }
        P321 => {
            let mut v = Vec::new();
            for p in &segs {
                for h in &csegs {
                    if p.iter().all(|e| !h.contains(e)) {
                        v.push(Instance::sets(alloc::vec![p.clone(), h.clone()]));
                    }
                }
            }
            v
        }
        P322 | P324 | CorSegcomp => csegs.iter().map(|h| Instance::sets(alloc::vec![h.clone()])).collect(),
        P323 => {
            let mut v = Vec::new();
            for (h, hg) in csegs.iter().zip(&ctx.atlas.cycle_segments) {
                if n0(hg) > 1 {
                    for c in &cycles {
                        v.push(Instance::sets(alloc::vec![h.clone(), c.clone()]));
                    }
                }
            }
            v
        }
        P327 => (1..=ctx.cdim.unwrap_or(0)).map(|m| Instance::default().with_param(m)).collect(),
        P328 => cycles.iter().map(|c| Instance::sets(alloc::vec![c.clone()])).collect(),
        P3210 => {
            let mut v = Vec::new();
            for (ci, c) in ctx.table.cycles().iter().enumerate() {
                for (h, hg) in csegs.iter().zip(&ctx.atlas.cycle_segments) {
                    let inside = hg.edges().iter().all(|&e| c.contains_edge(e))
                        && hg.vertices().iter().all(|&x| c.contains_vertex(x));
                    if inside {
                        v.push(Instance::sets(alloc::vec![cycles[ci].clone(), h.clone()]));
                    }
                }
            }
            v
        }
        P3211 => {
            let mut v = Vec::new();
            for c in &cycles {
                for l in 0..nl {
                    v.push(Instance::sets(alloc::vec![c.clone()]).with_param(l));
                }
            }
            v
        }
        ThmGoddyn => cycles.iter().map(|c| Instance::sets(alloc::vec![c.clone()])).collect(),
    };
    (list, note)
}

fn check(claim: ClaimId, ctx: &Context, config: &AuditConfig, inst: &Instance) -> Check {
    use ClaimId::*;
    let g = &ctx.graph;
    let Some(d) = ctx.cdim else {
        return Check::Violated(String::from("cyclic dimension not certified"));
    };
    let missing = |what: &str| Check::Violated(format!("instance {what} not found in the recomputed graph"));
    match claim {
        P31i | P31ix => {
            let Some(w) = ctx.segment_by_edges(&inst.edge_sets[0]) else {
                return missing("path segment");
            };
            let rest = g.subtract(&w.body(g));
            let Some(dr) = ctx.sub_cdim(&rest) else {
                return Check::Violated(String::from("cdim of G - G(w) not certified"));
            };
            if claim == P31i {
                holds(dr < d, || format!("cdim(G - G(w)) = {dr}, cdim(G) = {d}"))
            } else {
                holds(d == dr + 1, || format!("cdim(G - G(w)) = {dr}, cdim(G) = {d}"))
            }
        }
        P31ii => {
            let Some(w) = inst.walk.as_ref() else { return missing("path") };
            let Ok(pieces) = crate::cycles::decompose_maximal_pieces(g, &ctx.table, w) else {
                return missing("path");
            };
            let bodies: Vec<Vec<EdgeId>> = pieces.iter().map(|p| sorted(p.edges())).collect();
            for a in 0..bodies.len() {
                for b in a + 1..bodies.len() {
                    let share = bodies[a].iter().any(|e| bodies[b].contains(e));
                    if share && bodies[a] != bodies[b] {
                        return Check::Violated(format!("maximal pieces {:?} and {:?} overlap", bodies[a], bodies[b]));
                    }
                }
            }
            let covered: BTreeSet<EdgeId> = bodies.iter().flatten().copied().collect();
            holds(covered.len() == w.len(), || String::from("maximal pieces do not cover the path"))
        }
        P31iii => {
            let mut common: Option<BTreeSet<VertexId>> = None;
            for es in &inst.edge_sets {
                let Some(c) = ctx.cycle_by_edges(es) else { return missing("cycle") };
                let vs: BTreeSet<VertexId> = c.vertices().iter().copied().collect();
                common = Some(match common {
                    None => vs,
                    Some(x) => x.intersection(&vs).copied().collect(),
                });
            }
            let common = common.unwrap_or_default();
            if common.is_empty() {
                return Check::Holds(None);
            }
            holds(common.iter().any(|v| ctx.atlas.generic.binary_search(v).is_ok()), || {
                format!("common vertices {:?} hold no cycle generic vertex", common)
            })
        }
        P31iv => {
            let Some(p) = ctx.segment_by_edges(&inst.edge_sets[0]) else { return missing("path segment") };
            if inst.param == Some(0) {
                let Some(q) = ctx.segment_by_edges(&inst.edge_sets[1]) else { return missing("path segment") };
                if p.edges().iter().any(|e| q.edges().contains(e)) {
                    return Check::Violated(String::from("segments share an edge"));
                }
                let pv: BTreeSet<VertexId> = p.vertices().iter().copied().collect();
                let bad: Vec<VertexId> = q
                    .vertices()
                    .iter()
                    .copied()
                    .filter(|v| pv.contains(v) && ctx.atlas.generic.binary_search(v).is_err())
                    .collect();
                holds(bad.is_empty(), || format!("shared non-generic vertices {:?}", bad))
            } else {
                let Some(c) = ctx.cycle_by_edges(&inst.edge_sets[1]) else { return missing("cycle") };
                let meets = p.edges().iter().any(|&e| c.contains_edge(e));
                holds(!meets || p.edges().iter().all(|&e| c.contains_edge(e)), || {
                    String::from("segment meets the cycle without lying in it")
                })
            }
        }
        P31v => {
            let reduced = &ctx.atlas.reduced;
            let Ok(rt) = CycleTable::new(&reduced.graph, config.max_cycles) else {
                return Check::Violated(String::from("reduced graph exceeds the cycle cap"));
            };
            let eta = reduced.eta(&ctx.table, &rt);
            let dc = cdim(&reduced.graph, &rt, 0, false).value();
            let core = &ctx.atlas.core.core;
            let dcore = ctx.sub_cdim(core);
            match eta {
                Err(e) => Check::Violated(format!("eta: {e}")),
                Ok(_) => holds(dc == Some(d) && dcore == Some(d), || {
                    format!("cdim(G_c) = {dc:?}, cdim(G^c) = {dcore:?}, cdim(G) = {d}")
                }),
            }
        }
        P31vi => {
            let l = inst.param.unwrap_or(0);
            let Some(f) = ctx.labelings.get(l) else { return missing("labeling") };
            let (Some(a), Some(b)) = (
                ctx.table.index_of_edges(&inst.edge_sets[0]),
                ctx.table.index_of_edges(&inst.edge_sets[1]),
            ) else {
                return missing("cycle");
            };
            match parallel_restriction_check(g, f, &ctx.cert, a, b) {
                Ok(ok) => holds(ok, || String::from("restrictions are not parallel")),
                Err(e) => Check::Violated(format!("{e}")),
            }
        }
        P31viii => {
            let l = inst.param.unwrap_or(0);
            let Some(f) = ctx.labelings.get(l) else { return missing("labeling") };
            let h = g.edge_subgraph(inst.edge_sets[0].iter().copied());
            let r = f.restrict(g, &h);
            let dh = ctx.sub_cdim(&h);
            let span = r.span_dimension();
            holds(dh == Some(span), || format!("restricted span {span}, cdim(H) = {dh:?}"))
        }
        P321 => {
            let Some(p) = ctx.segment_by_edges(&inst.edge_sets[0]) else { return missing("path segment") };
            let Some(h) = ctx.cycle_segment_by_edges(&inst.edge_sets[1]) else { return missing("cycle segment") };
            let found = ctx.table.cycles().iter().find(|c| {
                p.edges().iter().all(|&e| c.contains_edge(e))
                    && !(h.edges().iter().all(|&e| c.contains_edge(e)) && h.vertices().iter().all(|&v| c.contains_vertex(v)))
            });
            match found {
                Some(c) => Check::Holds(Some(Instance::sets(alloc::vec![c.edges().to_vec()]))),
                None => Check::Violated(String::from("every cycle through P contains H")),
            }
        }
        P322 => {
            let Some(h) = ctx.cycle_segment_by_edges(&inst.edge_sets[0]) else { return missing("cycle segment") };
            let rest = g.subtract(h);
            let b = rest.bridges();
            holds(b.is_empty(), || format!("G - H has bridges {:?}", b))
        }
        P323 => {
            let Some(h) = ctx.cycle_segment_by_edges(&inst.edge_sets[0]) else { return missing("cycle segment") };
            let Some(c) = ctx.cycle_by_edges(&inst.edge_sets[1]) else { return missing("cycle") };
            let rest = g.subtract(h);
            let labels = rest.component_labels();
            let ch = c.graph(g).subtract(h);
            let cl = ch.component_labels();
            let mut owner: BTreeMap<usize, BTreeSet<usize>> = BTreeMap::new();
            for (i, &v) in ch.vertices().iter().enumerate() {
                let Some(ri) = rest.vertex_index(v) else {
                    return Check::Violated(format!("vertex {v} of C - H is not in G - H"));
                };
                owner.entry(labels[ri]).or_default().insert(cl[i]);
            }
            let bad = owner.values().find(|s| s.len() > 1);
            holds(bad.is_none(), || String::from("a component of G - H holds two components of C - H"))
        }
        P324 => {
            let Some(h) = ctx.cycle_segment_by_edges(&inst.edge_sets[0]) else { return missing("cycle segment") };
            let a = n0(h);
            let b = g.subtract(h).connected_components().n_total;
            holds(a == b, || format!("N0(H) = {a}, N(G - H) = {b}"))
        }
        P325 => {
            let bad: Vec<Vec<EdgeId>> = ctx
                .atlas
                .cycle_segments
                .iter()
                .filter(|h| n0(h) > 1)
                .map(|h| h.edges().to_vec())
                .collect();
            if bad.len() <= 1 {
                Check::Holds(Some(Instance::sets(bad)))
            } else {
                Check::Violated(format!("{} disconnected cycle segments", bad.len()))
            }
        }
        P326 => {
            let ok = |w: &Walk| {
                let rest = g.subtract(&w.body(g));
                let rt = ctx.table.restrict_to(&rest);
                rest.edge_count() > 0 && rest.is_connected() && rest.is_bridgeless() && is_strong_cyclic(&rest, &rt)
            };
            if let Some(w) = ctx.atlas.path_segments.iter().find(|w| ok(w)) {
                return Check::Holds(Some(Instance {
                    walk: Some(w.clone()),
                    ..Instance::default()
                }));
            }
            let (paths, truncated) = simple_paths(g, 1, config.path_cap);
            if let Some(w) = paths.iter().find(|w| ok(w)) {
                return Check::Holds(Some(Instance {
                    walk: Some(w.clone()),
                    ..Instance::default()
                }));
            }
            Check::Violated(format!(
                "no path P leaves G - P strong cyclic ({} paths{})",
                paths.len(),
                if truncated { ", truncated" } else { "" }
            ))
        }
        P327 => {
            let m = inst.param.unwrap_or(0);
            let verify = |h: &MultiGraph| {
                let ht = ctx.table.restrict_to(h);
                h.is_subgraph_of(g) && is_strong_cyclic(h, &ht) && cdim(h, &ht, 0, false).value() == Some(m)
            };
            if let Ok(h) = nested_subgraphs(g, &ctx.table, m) {
                if verify(&h) {
                    return Check::Holds(Some(Instance::sets(alloc::vec![h.edges().to_vec()]).with_param(m)));
                }
            }
            if g.edge_count() <= config.subset_edge_limit {
                for es in subgraph_sweep(g, config.subset_edge_limit) {
                    let h = g.edge_subgraph(es.iter().copied());
                    if verify(&h) {
                        return Check::Holds(Some(Instance::sets(alloc::vec![es]).with_param(m)));
                    }
                }
                Check::Violated(format!("no strong cyclic subgraph with cdim {m}"))
            } else {
                Check::Violated(format!("segment removal found no strong cyclic subgraph with cdim {m}; sweep skipped"))
            }
        }
        P328 => {
            let Some(c) = ctx.cycle_by_edges(&inst.edge_sets[0]) else { return missing("cycle") };
            let found = ctx.atlas.path_segments.iter().find(|w| {
                if w.edges().iter().any(|&e| c.contains_edge(e)) {
                    return false;
                }
                let rest = g.subtract(&w.body(g));
                c.lies_in(g, &rest) && c.vertices().iter().all(|&v| rest.contains_vertex(v)) && rest.is_connected() && rest.is_bridgeless()
            });
            match found {
                Some(w) => Check::Holds(Some(Instance::sets(alloc::vec![sorted(w.edges())]))),
                None => Check::Violated(String::from("no path segment P with C in G - P connected and bridgeless")),
            }
        }
        P329 => {
            let Some(w) = ctx.segment_by_edges(&inst.edge_sets[0]) else { return missing("path segment") };
            let body = w.body(g);
            let mut count = 0;
            let mut hits = Vec::new();
            for h in &ctx.atlas.cycle_segments {
                let rest = g.subtract(h);
                if !body.is_subgraph_of(&rest) {
                    continue;
                }
                let rt = ctx.table.restrict_to(&rest);
                let still = path_segments(&rest, &rt)
                    .iter()
                    .any(|s| sorted(s.edges()) == inst.edge_sets[0] && ends(s) == ends(w));
                if !still {
                    count += 1;
                    hits.push(h.edges().to_vec());
                }
            }
            if count <= 4 {
                Check::Holds(Some(Instance::sets(hits)))
            } else {
                Check::Violated(format!("{count} cycle segments break the path segment"))
            }
        }
        P3210 => {
            let Some(c) = ctx.cycle_by_edges(&inst.edge_sets[0]) else { return missing("cycle") };
            let Some(h) = ctx.cycle_segment_by_edges(&inst.edge_sets[1]) else { return missing("cycle segment") };
            match find_companion_cycle(g, &ctx.table, c, h) {
                Ok(found) => Check::Holds(Some(
                    Instance::sets(alloc::vec![found.cycle.edges().to_vec()]).with_param(usize::from(found.exact)),
                )),
                Err(e) => Check::Violated(format!("{e}")),
            }
        }
        P3211 => {
            let l = inst.param.unwrap_or(0);
            let Some(f) = ctx.labelings.get(l) else { return missing("labeling") };
            let Some(ci) = ctx.table.index_of_edges(&inst.edge_sets[0]) else { return missing("cycle") };
            match generator_search(f, ci, d) {
                Some(seq) => Check::Holds(Some(Instance {
                    edge_sets: seq.iter().map(|&(c, _)| ctx.table.cycles()[c].edges().to_vec()).collect(),
                    ..Instance::default()
                })),
                None => Check::Violated(String::from("no f-generator with the required properties")),
            }
        }
        CorDegc => {
            let lhs: i64 = ctx
                .atlas
                .core
                .degc
                .values()
                .filter(|&&k| k > 0)
                .map(|&k| k as i64 - 2)
                .sum();
            let rhs = 2 * (d as i64 - 1);
            if lhs == rhs {
                Check::Holds(None)
            } else {
                Check::Violated(format!("sum = {lhs}, 2(cdim - 1) = {rhs}"))
            }
        }
        CorSegcomp => {
            let Some(h) = ctx.cycle_segment_by_edges(&inst.edge_sets[0]) else { return missing("cycle segment") };
            let labels = h.component_labels();
            let k = labels.iter().copied().max().map_or(0, |x| x + 1);
            for comp in 0..k {
                let es: Vec<EdgeId> = h
                    .edge_triples()
                    .filter(|&(_, u, _)| labels[h.vertex_index(u).unwrap()] == comp)
                    .map(|(e, _, _)| e)
                    .collect();
                if es.is_empty() {
                    continue;
                }
                let matching = ctx.atlas.path_segments.iter().filter(|w| sorted(w.edges()) == es).count();
                if matching != 1 {
                    return Check::Violated(format!("component with edges {:?} is not one path segment", es));
                }
            }
            Check::Holds(None)
        }
        ThmGoddyn => {
            let Some(c) = ctx.cycle_by_edges(&inst.edge_sets[0]) else { return missing("cycle") };
            let options = BuilderOptions {
                exhaustive: config.exhaustive_builder,
            };
            match goddyn_construct(g, &ctx.table, c, options) {
                Err(e) => Check::Violated(format!("{e}")),
                Ok(cert) => match (&cert.outcome, assemble_cover(g, &cert)) {
                    (Outcome::Success, Some(cover)) if cover.passes() => Check::Holds(None),
                    (Outcome::Success, Some(cover)) => Check::Violated(format!("assembled cover fails: {:?}", cover.verdict)),
                    (Outcome::Success, None) => Check::Violated(String::from("final prime is not an even subgraph")),
                    (Outcome::Failure { step, reason }, _) => Check::Violated(format!("step {step}: {reason:?}")),
                },
            }
        }
    }
}

fn ends(w: &Walk) -> (VertexId, VertexId) {
    (w.start().min(w.end()), w.start().max(w.end()))
}

/// Ordered sequence `C_1 = C, C_2, …, C_n` of independent cycles with
/// signs such that every signed partial sum is `f` of some cycle and no edge
/// lies in more than two members.
pub fn generator_search(f: &SignLabeling, start: usize, n: usize) -> Option<Vec<(usize, i8)>> {
    let rows: Vec<Vec<i64>> = f.rows();
    let lookup: BTreeMap<Vec<i64>, usize> = rows.iter().enumerate().map(|(i, r)| (r.clone(), i)).collect();
    let mut counts = alloc::vec![0u8; f.edges().len()];
    rows[start].iter().enumerate().filter(|(_, &x)| x != 0).for_each(|(e, _)| counts[e] += 1);
    let mut seq = alloc::vec![(start, 1i8)];
    let sum = rows[start].clone();
    if search_step(&rows, &lookup, &mut seq, sum, &mut counts, n) {
        Some(seq)
    } else {
        None
    }
}

fn search_step(
    rows: &[Vec<i64>],
    lookup: &BTreeMap<Vec<i64>, usize>,
    seq: &mut Vec<(usize, i8)>,
    sum: Vec<i64>,
    counts: &mut [u8],
    n: usize,
) -> bool {
    if seq.len() == n {
        return true;
    }
    for d in 0..rows.len() {
        if seq.iter().any(|&(c, _)| c == d) {
            continue;
        }
        let support: Vec<usize> = rows[d].iter().enumerate().filter(|(_, &x)| x != 0).map(|(e, _)| e).collect();
        if support.iter().any(|&e| counts[e] >= 2) {
            continue;
        }
        let members: Vec<Vec<i64>> = seq.iter().map(|&(c, _)| rows[c].clone()).chain([rows[d].clone()]).collect();
        if rank_of(&members) != members.len() {
            continue;
        }
        for s in [1i64, -1] {
            let next: Vec<i64> = sum.iter().zip(&rows[d]).map(|(a, b)| a + s * b).collect();
            if !lookup.contains_key(&next) {
                continue;
            }
            support.iter().for_each(|&e| counts[e] += 1);
            seq.push((d, s as i8));
            if search_step(rows, lookup, seq, next, counts, n) {
                return true;
            }
            seq.pop();
            support.iter().for_each(|&e| counts[e] -= 1);
        }
    }
    false
}

/// Runs one claim on a context and folds the instances into a record.
pub fn audit_claim(name: &str, claim: ClaimId, ctx: &Context, config: &AuditConfig) -> AuditRecord {
    let mut rec = AuditRecord {
        graph: String::from(name),
        claim,
        status: Status::NotApplicable,
        instances: 0,
        failing: 0,
        note: None,
        witness: None,
        counterexample: None,
    };
    if let Err(why) = gate(claim, ctx) {
        rec.note = Some(String::from(why));
        return rec;
    }
    let (list, note) = instances(claim, ctx, config);
    rec.note = note;
    if list.is_empty() {
        rec.note = Some(String::from("no instances"));
        return rec;
    }
    rec.instances = list.len();
    for inst in &list {
        match check(claim, ctx, config, inst) {
            Check::Holds(w) => {
                if rec.witness.is_none() {
                    rec.witness = w;
                }
            }
            Check::Violated(detail) => {
                rec.failing += 1;
                if rec.counterexample.is_none() {
                    rec.counterexample = Some(Counterexample {
                        claim,
                        graph: ctx.graph.clone(),
                        instance: inst.clone(),
                        detail,
                    });
                }
            }
        }
    }
    rec.status = if rec.failing == 0 { Status::Pass } else { Status::Fail };
    rec
}

/// Builder and oracle on every cycle, producing the discrepancy rows.
fn builder_oracle(name: &str, ctx: &Context, config: &AuditConfig, out: &mut GraphAudit) {
    if gate(ClaimId::ThmGoddyn, ctx).is_err() {
        return;
    }
    let g = &ctx.graph;
    for c in ctx.table.cycles() {
        let inst = Instance::sets(alloc::vec![c.edges().to_vec()]);
        let builder = check(ClaimId::ThmGoddyn, ctx, config, &inst);
        let passed = matches!(builder, Check::Holds(_));
        let oracle = if !config.run_oracle {
            OracleStatus::Skipped(String::from("oracle disabled"))
        } else {
            match oracle_cdc(g, &ctx.table, Some(c), config.oracle_cap) {
                Ok(r) => match r.cover {
                    Some(cover) if cover.passes() => OracleStatus::Found,
                    Some(_) => OracleStatus::Skipped(String::from("oracle cover failed verification")),
                    None => OracleStatus::ExhaustiveNone,
                },
                Err(e) => OracleStatus::Skipped(format!("{e}")),
            }
        };
        if passed && oracle == OracleStatus::ExhaustiveNone {
            out.contradictions += 1;
        }
        if let Check::Violated(detail) = builder {
            out.discrepancies.push(Discrepancy {
                graph: String::from(name),
                cycle: c.edges().to_vec(),
                builder: detail,
                oracle,
            });
        } else if oracle == OracleStatus::ExhaustiveNone {
            out.discrepancies.push(Discrepancy {
                graph: String::from(name),
                cycle: c.edges().to_vec(),
                builder: String::from("pass"),
                oracle,
            });
        }
    }
}

/// All registered claims on one corpus graph.
pub fn audit_graph(entry: &CorpusEntry, config: &AuditConfig) -> GraphAudit {
    let mut out = GraphAudit::default();
    let ctx = match Context::new(&entry.graph, config) {
        Ok(c) => c,
        Err(why) => {
            out.records = ClaimId::ALL
                .iter()
                .map(|&claim| AuditRecord {
                    graph: entry.name.clone(),
                    claim,
                    status: Status::NotApplicable,
                    instances: 0,
                    failing: 0,
                    note: Some(why.clone()),
                    witness: None,
                    counterexample: None,
                })
                .collect();
            return out;
        }
    };
    out.records = ClaimId::ALL
        .iter()
        .map(|&claim| audit_claim(&entry.name, claim, &ctx, config))
        .collect();
    builder_oracle(&entry.name, &ctx, config, &mut out);
    out
}

/// Sequential audit of a whole corpus.
pub fn audit(entries: &[CorpusEntry], config: &AuditConfig) -> AuditReport {
    AuditReport::from_parts(entries.iter().map(|e| audit_graph(e, config)).collect())
}

/// Re-runs the originating check on a counterexample. `Ok(true)` means the
/// claim holds on it (the counterexample does not reproduce).
pub fn replay(cex: &Counterexample, config: &AuditConfig) -> Result<bool, String> {
    let ctx = Context::new(&cex.graph, config)?;
    gate(cex.claim, &ctx).map_err(String::from)?;
    Ok(matches!(check(cex.claim, &ctx, config, &cex.instance), Check::Holds(_)))
}
