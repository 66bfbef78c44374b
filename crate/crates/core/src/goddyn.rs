//! The segment-removal construction of a cycle double cover through a
//! prescribed cycle, cover verification and the telescoping identity.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use fixedbitset::FixedBitSet;
use thiserror::Error;

use crate::cycles::{CycleBody, CycleTable};
use crate::graph::{EdgeId, MultiGraph};
use crate::segments::{is_cycle_segment, SegmentAtlas};
use crate::signlab::{cdim, is_f_generator, orientation_labeling, Generator, SignLabeling};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BuilderError {
    #[error("graph is not connected")]
    NotConnected,
    #[error("graph has bridges {}", crate::graph::id_list(.0))]
    HasBridge(Vec<EdgeId>),
    #[error("prescribed cycle is not a cycle of the graph")]
    NotACycle,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CompanionError {
    #[error("graph is not cactus-free")]
    NotCactusFree,
    #[error("subgraph is not a cycle segment")]
    NotCycleSegment,
    #[error("cycle segment does not lie in the cycle")]
    NotInCycle,
    #[error("no cycle meets the given cycle exactly in the segment")]
    NotFound,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoverError {
    #[error("cover member {index} is not a cycle body of the graph")]
    NotACycle { index: usize },
}

/// Why a construction stopped.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum FailureReason {
    /// A recursion graph is disconnected or has bridges.
    PreconditionLost { bridges: Vec<EdgeId> },
    /// A strong cyclic recursion graph has a leaf cycle.
    NotCactusFree,
    /// No pair `(P, C₀)` with `P = C ∩ C₀` exists.
    NoCompanion,
    /// `(C ∪ C₀) − P` is not a cycle body.
    HatNotCycle,
    /// The cyclic dimension could not be certified.
    Uncertified,
    /// Characteristic map exceeds 2 on these edges.
    Multiplicity { edges: Vec<EdgeId> },
    /// No sign `s(C_t)` makes the signed partial sum a signed label vector.
    SignConflict { t: usize },
    /// The members do not form an f-generator.
    NotGenerator { members: usize, cdim: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum StepKind {
    Base1,
    Base2,
    Recurse,
    Split,
}

/// One recursion step.
///
/// Local index `i` of the step (the numbering `C_1 = C, C_2 = C₀, C_i =
/// Ĉ_{i−1}` over `m + 1 = cdim` members) is global index `offset + i − 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceStep {
    pub depth: usize,
    pub kind: StepKind,
    pub offset: usize,
    pub graph_edges: Vec<EdgeId>,
    pub graph_vertices: usize,
    pub cdim: Option<usize>,
    pub cycle: Vec<EdgeId>,
    pub path_segment: Option<Vec<EdgeId>>,
    pub companion: Option<Vec<EdgeId>>,
    pub c_hat: Option<Vec<EdgeId>>,
    /// Cycle components visited by a split, in visiting order.
    pub components: Vec<Vec<EdgeId>>,
}

impl TraceStep {
    /// `m` in the `cdim = m + 1` numbering.
    pub fn m(&self) -> Option<usize> {
        self.cdim.map(|d| d.saturating_sub(1))
    }

    /// Global index of local index `i`.
    pub fn global_index(&self, i: usize) -> usize {
        self.offset + i - 1
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    Success,
    Failure { step: usize, reason: FailureReason },
}

/// Result of one construction with its full trace.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorCertificate {
    pub cycle: CycleBody,
    pub generator: Option<Generator>,
    /// `ε_t` with `Σ_{i≤t} s(C_i) f(C_i) = ε_t f(C'_t)` for the orientation labeling.
    pub prime_signs: Vec<i8>,
    pub trace: Vec<TraceStep>,
    pub outcome: Outcome,
    pub choices_tried: usize,
}

impl GeneratorCertificate {
    pub fn is_success(&self) -> bool {
        self.outcome == Outcome::Success
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct BuilderOptions {
    /// Backtrack over every `(P, C₀)` choice instead of the first one.
    pub exhaustive: bool,
}

/// Companion found for a cycle segment.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Companion {
    pub cycle: CycleBody,
    /// Whether `C ∩ C₀` equals the segment including isolated vertices.
    pub exact: bool,
}

/// A cycle `C₀` with `C ∩ C₀ = H`, preferring exact equality and otherwise
/// equality up to isolated vertices; first match in cycle order.
pub fn find_companion_cycle(
    g: &MultiGraph,
    table: &CycleTable,
    c: &CycleBody,
    h: &MultiGraph,
) -> Result<Companion, CompanionError> {
    let atlas = SegmentAtlas::new(g, table);
    if atlas.cactus_free != Some(true) {
        return Err(CompanionError::NotCactusFree);
    }
    if !is_cycle_segment(g, table, h) {
        return Err(CompanionError::NotCycleSegment);
    }
    if !h.edges().iter().all(|&e| c.contains_edge(e)) || !h.vertices().iter().all(|&v| c.contains_vertex(v)) {
        return Err(CompanionError::NotInCycle);
    }
    let cg = c.graph(g);
    let mut loose = None;
    for c0 in table.cycles() {
        let meet = cg.intersection(&c0.graph(g)).expect("subgraphs of one host");
        if meet == *h {
            return Ok(Companion {
                cycle: c0.clone(),
                exact: true,
            });
        }
        if loose.is_none() && meet.without_isolated() == h.without_isolated() {
            loose = Some(c0.clone());
        }
    }
    loose
        .map(|cycle| Companion { cycle, exact: false })
        .ok_or(CompanionError::NotFound)
}

/// Builds the generator for `(G, C)` and post-checks it.
pub fn goddyn_construct(
    g: &MultiGraph,
    table: &CycleTable,
    c: &CycleBody,
    options: BuilderOptions,
) -> Result<GeneratorCertificate, BuilderError> {
    if !g.is_connected() {
        return Err(BuilderError::NotConnected);
    }
    let bridges = g.bridges();
    if !bridges.is_empty() {
        return Err(BuilderError::HasBridge(bridges));
    }
    if table.index_of(c).is_none() {
        return Err(BuilderError::NotACycle);
    }
    let mut b = Builder {
        options,
        trace: Vec::new(),
        tried: 0,
    };
    let result = b.build(g, table, c, 0, 1);
    let (generator, prime_signs, outcome) = match result {
        Ok(members) => {
            let (gen, eps, outcome) = post_check(g, table, members);
            (Some(gen), eps, outcome)
        }
        Err(f) => (
            None,
            Vec::new(),
            Outcome::Failure {
                step: f.step,
                reason: f.reason,
            },
        ),
    };
    Ok(GeneratorCertificate {
        cycle: c.clone(),
        generator,
        prime_signs,
        trace: b.trace,
        outcome,
        choices_tried: b.tried,
    })
}

struct Failure {
    step: usize,
    reason: FailureReason,
}

struct Builder {
    options: BuilderOptions,
    trace: Vec<TraceStep>,
    tried: usize,
}

impl Builder {
    fn step(&mut self, s: TraceStep) -> usize {
        self.trace.push(s);
        self.trace.len() - 1
    }

    fn build(
        &mut self,
        g: &MultiGraph,
        table: &CycleTable,
        c: &CycleBody,
        depth: usize,
        offset: usize,
    ) -> Result<Vec<CycleBody>, Failure> {
        let mut step = TraceStep {
            depth,
            kind: StepKind::Base1,
            offset,
            graph_edges: g.edges().to_vec(),
            graph_vertices: g.vertex_count(),
            cdim: None,
            cycle: c.edges().to_vec(),
            path_segment: None,
            companion: None,
            c_hat: None,
            components: Vec::new(),
        };
        let bridges = g.bridges();
        if !g.is_connected() || !bridges.is_empty() {
            let at = self.step(step);
            return Err(Failure {
                step: at,
                reason: FailureReason::PreconditionLost { bridges },
            });
        }
        let atlas = SegmentAtlas::new(g, table);
        if !atlas.strong_cyclic {
            return self.split(g, table, c, &atlas, step);
        }
        let Some(n) = cdim(g, table, 0, false).value() else {
            let at = self.step(step);
            return Err(Failure {
                step: at,
                reason: FailureReason::Uncertified,
            });
        };
        step.cdim = Some(n);
        if n <= 1 {
            self.step(step);
            return Ok(alloc::vec![c.clone()]);
        }
        step.kind = if n == 2 { StepKind::Base2 } else { StepKind::Recurse };
        if atlas.cactus_free != Some(true) {
            let at = self.step(step);
            return Err(Failure {
                step: at,
                reason: FailureReason::NotCactusFree,
            });
        }
        let pairs = companion_pairs(g, table, c, &atlas);
        if pairs.is_empty() {
            let at = self.step(step);
            return Err(Failure {
                step: at,
                reason: FailureReason::NoCompanion,
            });
        }
        let mut first_failure = None;
        for (p, c0) in pairs {
            self.tried += 1;
            let mark = self.trace.len();
            let attempt = self.descend(g, table, c, &p, &c0, step.clone(), depth, offset);
            match attempt {
                Ok(members) => return Ok(members),
                Err(f) if !self.options.exhaustive => return Err(f),
                Err(f) => {
                    if first_failure.is_none() {
                        first_failure = Some((f, self.trace[mark..].to_vec()));
                    }
                    self.trace.truncate(mark);
                }
            }
        }
        // failed attempts were truncated back to the same mark, so the
        // recorded step indices are valid again once restored
        let (f, steps) = first_failure.expect("at least one pair tried");
        self.trace.extend(steps);
        Err(f)
    }

    #[allow(clippy::too_many_arguments)]
    fn descend(
        &mut self,
        g: &MultiGraph,
        table: &CycleTable,
        c: &CycleBody,
        p: &[EdgeId],
        c0: &CycleBody,
        mut step: TraceStep,
        depth: usize,
        offset: usize,
    ) -> Result<Vec<CycleBody>, Failure> {
        step.path_segment = Some(p.to_vec());
        step.companion = Some(c0.edges().to_vec());
        let hat_edges: Vec<EdgeId> = c
            .edges()
            .iter()
            .chain(c0.edges())
            .copied()
            .filter(|&e| c.contains_edge(e) != c0.contains_edge(e))
            .collect::<alloc::collections::BTreeSet<_>>()
            .into_iter()
            .collect();
        let Ok(c_hat) = CycleBody::from_edges(g, &hat_edges) else {
            let at = self.step(step);
            return Err(Failure {
                step: at,
                reason: FailureReason::HatNotCycle,
            });
        };
        step.c_hat = Some(c_hat.edges().to_vec());
        let at = self.step(step);
        let g_hat = g.subtract(&g.edge_subgraph(p.iter().copied()));
        let t_hat = table.restrict_to(&g_hat);
        let rest = self.build(&g_hat, &t_hat, &c_hat, depth + 1, offset + 1)?;
        let mut members = alloc::vec![c.clone(), c0.clone()];
        members.extend(rest.into_iter().skip(1));
        local_check(g, &members).map_err(|reason| Failure { step: at, reason })?;
        Ok(members)
    }

    fn split(
        &mut self,
        g: &MultiGraph,
        table: &CycleTable,
        c: &CycleBody,
        atlas: &SegmentAtlas,
        mut step: TraceStep,
    ) -> Result<Vec<CycleBody>, Failure> {
        let mut comps: Vec<&MultiGraph> = atlas.components.classes.iter().collect();
        comps.sort_by_key(|k| !c.lies_in(g, k));
        step.kind = StepKind::Split;
        step.components = comps.iter().map(|k| k.edges().to_vec()).collect();
        let (depth, offset) = (step.depth, step.offset);
        self.step(step);
        let mut members = Vec::new();
        for k in comps {
            let tk = table.restrict_to(k);
            let ck = if c.lies_in(g, k) { c.clone() } else { tk.cycles()[0].clone() };
            let part = self.build(k, &tk, &ck, depth + 1, offset + members.len())?;
            members.extend(part);
        }
        Ok(members)
    }
}

/// All `(P, C₀)` with `P` a path segment in `C` and `C ∩ C₀ = G(P)` exactly,
/// in lexicographic order of `P` then `C₀`.
fn companion_pairs(g: &MultiGraph, table: &CycleTable, c: &CycleBody, atlas: &SegmentAtlas) -> Vec<(Vec<EdgeId>, CycleBody)> {
    let ci = table.index_of(c).expect("cycle of the table");
    let mut segs: Vec<(Vec<EdgeId>, FixedBitSet, FixedBitSet)> = atlas
        .segments_of_cycle(c)
        .into_iter()
        .map(|i| {
            let w = &atlas.path_segments[i];
            let mut es = w.edges().to_vec();
            es.sort_unstable();
            let mut em = FixedBitSet::with_capacity(g.edge_count());
            es.iter().for_each(|&e| em.insert(g.edge_index(e).unwrap()));
            let mut vm = FixedBitSet::with_capacity(g.vertex_count());
            w.vertices().iter().for_each(|&v| vm.insert(g.vertex_index(v).unwrap()));
            (es, em, vm)
        })
        .collect();
    segs.sort_by(|a, b| a.0.cmp(&b.0));
    let mut out = Vec::new();
    for (es, em, vm) in &segs {
        for j in 0..table.len() {
            if j == ci {
                continue;
            }
            let mut e_meet = table.edge_mask(ci).clone();
            e_meet.intersect_with(table.edge_mask(j));
            let mut v_meet = table.vertex_mask(ci).clone();
            v_meet.intersect_with(table.vertex_mask(j));
            if e_meet == *em && v_meet == *vm {
                out.push((es.clone(), table.cycles()[j].clone()));
            }
        }
    }
    out
}

/// Characteristic bound and sign consistency for one level; `t` in a sign
/// conflict is local to the level.
fn local_check(g: &MultiGraph, members: &[CycleBody]) -> Result<(), FailureReason> {
    let over = over_two(members);
    if !over.is_empty() {
        return Err(FailureReason::Multiplicity { edges: over });
    }
    signed_sums(g, members).map(|_| ()).map_err(|t| FailureReason::SignConflict { t })
}

fn over_two(members: &[CycleBody]) -> Vec<EdgeId> {
    let mut count: BTreeMap<EdgeId, u32> = BTreeMap::new();
    for m in members {
        for &e in m.edges() {
            *count.entry(e).or_insert(0) += 1;
        }
    }
    count.into_iter().filter(|&(_, k)| k > 2).map(|(e, _)| e).collect()
}

/// Orientation label vector of a cycle as a map.
fn orient(g: &MultiGraph, c: &CycleBody) -> BTreeMap<EdgeId, i64> {
    let w = c.walk(g);
    w.edges()
        .iter()
        .enumerate()
        .map(|(i, &e)| {
            let (u, _) = g.endpoints(e).unwrap();
            (e, if w.vertices()[i] == u { 1 } else { -1 })
        })
        .collect()
}

/// Signs `s(C_t)` making every signed partial sum of orientation label
/// vectors a {0, ±1} vector supported on the GF(2) partial sum. Returns the
/// 1-based index of the first conflicting member on failure.
fn signed_sums(g: &MultiGraph, members: &[CycleBody]) -> Result<(Vec<i8>, Vec<BTreeMap<EdgeId, i64>>), usize> {
    let mut acc: BTreeMap<EdgeId, i64> = BTreeMap::new();
    let mut signs = Vec::with_capacity(members.len());
    let mut sums = Vec::with_capacity(members.len());
    for (t, m) in members.iter().enumerate() {
        let f = orient(g, m);
        let mut forced: Option<i64> = None;
        for (e, &x) in &f {
            if let Some(&a) = acc.get(e) {
                let s = -a * x;
                if forced.map_or(false, |p| p != s) {
                    return Err(t + 1);
                }
                forced = Some(s);
            }
        }
        let s = forced.unwrap_or(1);
        for (&e, &x) in &f {
            let v = acc.entry(e).or_insert(0);
            *v += s * x;
            if *v == 0 {
                acc.remove(&e);
            }
        }
        if acc.values().any(|v| v.abs() > 1) {
            return Err(t + 1);
        }
        signs.push(s as i8);
        sums.push(acc.clone());
    }
    Ok((signs, sums))
}

/// Global post-check: 11(b), 11(c) up to the sign of each prime, generator
/// property under the orientation labeling.
fn post_check(g: &MultiGraph, table: &CycleTable, members: Vec<CycleBody>) -> (Generator, Vec<i8>, Outcome) {
    let over = over_two(&members);
    let signed = signed_sums(g, &members);
    let signs = signed.as_ref().map(|(s, _)| s.clone()).unwrap_or_else(|_| alloc::vec![1; members.len()]);
    let gen = Generator::from_members(g, members, signs);
    let fail = |reason| Outcome::Failure { step: 0, reason };
    if !over.is_empty() {
        return (gen, Vec::new(), fail(FailureReason::Multiplicity { edges: over }));
    }
    let sums = match signed {
        Ok((_, sums)) => sums,
        Err(t) => return (gen, Vec::new(), fail(FailureReason::SignConflict { t })),
    };
    let mut eps = Vec::with_capacity(sums.len());
    for (t, sum) in sums.iter().enumerate() {
        match gen.target_cycle(g, t) {
            Some(prime) => {
                let f = orient(g, &prime);
                if *sum == f {
                    eps.push(1);
                } else if sum.iter().all(|(e, &x)| f.get(e) == Some(&-x)) && sum.len() == f.len() {
                    eps.push(-1);
                } else {
                    return (gen, eps, fail(FailureReason::SignConflict { t: t + 1 }));
                }
            }
            None => eps.push(0),
        }
    }
    let cert = cdim(g, table, 0, false);
    let Some(d) = cert.value() else {
        return (gen, eps, fail(FailureReason::Uncertified));
    };
    if is_f_generator(&gen.members, &cert.witness, &cert) != Ok(true) {
        let members = gen.members.len();
        return (gen, eps, fail(FailureReason::NotGenerator { members, cdim: d }));
    }
    (gen, eps, Outcome::Success)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CoverSource {
    Builder,
    Oracle,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail { offending_edges: Vec<EdgeId>, missing_required: bool },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverCertificate {
    pub cycles: Vec<CycleBody>,
    pub multiplicity: BTreeMap<EdgeId, u32>,
    pub contains_required: bool,
    pub source: CoverSource,
    pub verdict: Verdict,
}

impl CoverCertificate {
    pub fn passes(&self) -> bool {
        self.verdict == Verdict::Pass
    }
}

/// The single pass/fail rule for covers: every edge exactly twice and the
/// required cycle present.
pub fn verify_cover(
    g: &MultiGraph,
    cover: &[CycleBody],
    required: Option<&CycleBody>,
    source: CoverSource,
) -> Result<CoverCertificate, CoverError> {
    let mut multiplicity: BTreeMap<EdgeId, u32> = g.edges().iter().map(|&e| (e, 0)).collect();
    for (index, c) in cover.iter().enumerate() {
        match CycleBody::from_edges(g, c.edges()) {
            Ok(ref body) if body == c => {}
            _ => return Err(CoverError::NotACycle { index }),
        }
        for &e in c.edges() {
            *multiplicity.get_mut(&e).expect("validated member") += 1;
        }
    }
    let offending_edges: Vec<EdgeId> = multiplicity.iter().filter(|&(_, &k)| k != 2).map(|(&e, _)| e).collect();
    let contains_required = required.map_or(true, |r| cover.contains(r));
    let verdict = if offending_edges.is_empty() && contains_required {
        Verdict::Pass
    } else {
        Verdict::Fail {
            offending_edges,
            missing_required: !contains_required,
        }
    };
    Ok(CoverCertificate {
        cycles: cover.to_vec(),
        multiplicity,
        contains_required,
        source,
        verdict,
    })
}

/// Splits an even subgraph into edge-disjoint cycles, smallest edge first.
pub fn decompose_even(g: &MultiGraph, edges: &[EdgeId]) -> Option<Vec<CycleBody>> {
    let mut left: alloc::collections::BTreeSet<EdgeId> = edges.iter().copied().collect();
    let mut out = Vec::new();
    while let Some(&first) = left.iter().next() {
        let (u, v) = g.endpoints(first)?;
        left.remove(&first);
        let mut path_v = alloc::vec![u, v];
        let mut path_e = alloc::vec![first];
        loop {
            let at = *path_v.last().unwrap();
            if let Some(pos) = path_v[..path_v.len() - 1].iter().position(|&x| x == at) {
                let cyc: Vec<EdgeId> = path_e[pos..].to_vec();
                out.push(CycleBody::from_edges(g, &cyc).ok()?);
                path_e.truncate(pos);
                path_v.truncate(pos + 1);
                if path_e.is_empty() {
                    break;
                }
                continue;
            }
            let next = left.iter().copied().find(|&e| {
                let (a, b) = g.endpoints(e).unwrap();
                a == at || b == at
            })?;
            left.remove(&next);
            let (a, b) = g.endpoints(next).unwrap();
            path_v.push(if a == at { b } else { a });
            path_e.push(next);
        }
    }
    out.sort();
    Some(out)
}

/// `{C_1, …, C_n} ∪ {C'_n}` for a successful certificate, with the last
/// prime split into cycles when it is not one; `None` on failure.
pub fn assemble_cover(g: &MultiGraph, cert: &GeneratorCertificate) -> Option<CoverCertificate> {
    if !cert.is_success() {
        return None;
    }
    let gen = cert.generator.as_ref()?;
    let mut cycles = gen.members.clone();
    let last = gen.partial_sums_targets.last()?;
    cycles.extend(decompose_even(g, last.edges())?);
    verify_cover(g, &cycles, Some(&cert.cycle), CoverSource::Builder).ok()
}

/// Exact identity `Σ_{i≤t} s(C_i) f(C_i) = f(C'_t)` for every `t`.
pub fn telescoping_check(cert: &GeneratorCertificate, f: &SignLabeling, host: &MultiGraph) -> bool {
    let Some(gen) = cert.generator.as_ref() else {
        return false;
    };
    let mut terms = Vec::new();
    for (t, (m, &s)) in gen.members.iter().zip(&gen.signs).enumerate() {
        let Some(i) = f.index_of(m) else { return false };
        terms.push((i, i64::from(s)));
        let Some(prime) = gen.target_cycle(host, t) else {
            return false;
        };
        let Some(pi) = f.index_of(&prime) else { return false };
        let lhs = f.combination(&terms);
        let rhs = f.combination(&[(pi, 1)]);
        if lhs != rhs {
            return false;
        }
    }
    true
}

/// `f` with `f(C'_t)` negated wherever the certificate recorded `ε_t = −1`.
/// `None` when a negated prime is also a member, where negation would change
/// the partial sums themselves.
pub fn aligned_labeling(cert: &GeneratorCertificate, f: &SignLabeling, host: &MultiGraph) -> Option<SignLabeling> {
    let gen = cert.generator.as_ref()?;
    let mut out = f.clone();
    for (t, &eps) in cert.prime_signs.iter().enumerate() {
        if eps != -1 {
            continue;
        }
        let prime = gen.target_cycle(host, t)?;
        if gen.members.contains(&prime) {
            return None;
        }
        out = out.with_flipped_cycle(f.index_of(&prime)?);
    }
    Some(out)
}

/// Orientation labeling of `g` realigned to a certificate.
pub fn aligned_orientation(g: &MultiGraph, table: &CycleTable, cert: &GeneratorCertificate) -> Option<SignLabeling> {
    aligned_labeling(cert, &orientation_labeling(g, table), g)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn setup(edges: &[(u32, u32, u32)]) -> (MultiGraph, CycleTable) {
        let g = MultiGraph::from_edges(edges).unwrap();
        let t = CycleTable::new(&g, 10_000).unwrap();
        (g, t)
    }

    fn cyc(g: &MultiGraph, es: &[u32]) -> CycleBody {
        let es: Vec<EdgeId> = es.iter().map(|&e| EdgeId(e)).collect();
        CycleBody::from_edges(g, &es).unwrap()
    }

    const TRI: &[(u32, u32, u32)] = &[(1, 1, 2), (2, 2, 3), (3, 1, 3)];
    const THETA: &[(u32, u32, u32)] = &[(1, 1, 2), (2, 1, 2), (3, 1, 2)];
    const K4: &[(u32, u32, u32)] = &[(1, 1, 2), (2, 1, 3), (3, 1, 4), (4, 2, 3), (5, 2, 4), (6, 3, 4)];
    const SUB_THETA: &[(u32, u32, u32)] = &[(1, 1, 3), (2, 3, 2), (3, 1, 4), (4, 4, 2), (5, 1, 5), (6, 5, 2)];

    #[test]
    fn companion_examples() {
        let (g, t) = setup(THETA);
        let c = cyc(&g, &[1, 2]);
        let h = g.edge_subgraph([EdgeId(1)]);
        let found = find_companion_cycle(&g, &t, &c, &h).unwrap();
        assert_eq!(found.cycle, cyc(&g, &[1, 3]));
        assert!(found.exact);

        let (g, t) = setup(K4);
        let c = cyc(&g, &[1, 2, 4]);
        let h = g.edge_subgraph([EdgeId(1)]);
        let found = find_companion_cycle(&g, &t, &c, &h).unwrap().cycle;
        let meet = c.graph(&g).intersection(&found.graph(&g)).unwrap();
        assert_eq!(meet, h);

        let (g, t) = setup(SUB_THETA);
        let c = cyc(&g, &[1, 2, 3, 4]);
        let h = g.edge_subgraph([EdgeId(1), EdgeId(2)]);
        assert_eq!(find_companion_cycle(&g, &t, &c, &h).unwrap().cycle, cyc(&g, &[1, 2, 5, 6]));
        let (g, t) = setup(&[(1, 1, 2), (2, 2, 3), (3, 1, 3), (4, 3, 4), (5, 4, 5), (6, 3, 5)]);
        let c = cyc(&g, &[1, 2, 3]);
        assert_eq!(
            find_companion_cycle(&g, &t, &c, &g.edge_subgraph([EdgeId(1), EdgeId(2), EdgeId(3)])),
            Err(CompanionError::NotCactusFree)
        );
    }

    #[test]
    fn triangle_cover() {
        let (g, t) = setup(TRI);
        let c = t.cycles()[0].clone();
        let cert = goddyn_construct(&g, &t, &c, BuilderOptions::default()).unwrap();
        assert!(cert.is_success());
        assert_eq!(cert.generator.as_ref().unwrap().members, [c.clone()]);
        let cover = assemble_cover(&g, &cert).unwrap();
        assert_eq!(cover.cycles, [c.clone(), c]);
        assert!(cover.passes());
        let f = orientation_labeling(&g, &t);
        assert!(telescoping_check(&cert, &f, &g));
    }

    #[test]
    fn theta_cover_and_telescoping() {
        let (g, t) = setup(THETA);
        let c = cyc(&g, &[1, 2]);
        let cert = goddyn_construct(&g, &t, &c, BuilderOptions::default()).unwrap();
        assert!(cert.is_success(), "{:?}", cert.outcome);
        let gen = cert.generator.as_ref().unwrap();
        assert_eq!(gen.members, [cyc(&g, &[1, 2]), cyc(&g, &[1, 3])]);
        assert_eq!(gen.partial_sums_targets[1].edges(), [EdgeId(2), EdgeId(3)]);
        assert_eq!(cert.trace[0].kind, StepKind::Base2);
        let cover = assemble_cover(&g, &cert).unwrap();
        assert_eq!(cover.cycles.len(), 3);
        assert!(cover.passes());
        let f = orientation_labeling(&g, &t);
        // f(12) − f(13) = −f(23) under the orientation labeling
        assert_eq!(cert.prime_signs, [1, -1]);
        assert!(!telescoping_check(&cert, &f, &g));
        let aligned = aligned_labeling(&cert, &f, &g).unwrap();
        assert!(telescoping_check(&cert, &aligned, &g));
        let mut wrong = cert.clone();
        wrong.generator.as_mut().unwrap().signs[1] = 1;
        assert!(!telescoping_check(&wrong, &aligned, &g));
    }

    #[test]
    fn k4_cover() {
        let (g, t) = setup(K4);
        let c = cyc(&g, &[1, 2, 4]);
        let cert = goddyn_construct(&g, &t, &c, BuilderOptions::default()).unwrap();
        assert!(cert.is_success(), "{:?}", cert.outcome);
        assert_eq!(cert.generator.as_ref().unwrap().members.len(), 3);
        assert!(cert.generator.as_ref().unwrap().max_multiplicity() <= 2);
        let cover = assemble_cover(&g, &cert).unwrap();
        assert!(cover.passes(), "{:?}", cover.verdict);
        assert_eq!(cover.cycles[0], c);
    }

    #[test]
    fn every_cycle_of_small_graphs() {
        for edges in [THETA, K4, SUB_THETA] {
            let (g, t) = setup(edges);
            for c in t.cycles() {
                let cert = goddyn_construct(&g, &t, c, BuilderOptions::default()).unwrap();
                if let Some(cover) = assemble_cover(&g, &cert) {
                    assert!(cover.passes());
                }
            }
        }
    }

    #[test]
    fn builder_rejects_bridges() {
        let (g, t) = setup(&[(1, 1, 2), (2, 2, 3), (3, 1, 3), (4, 3, 4), (5, 4, 5), (6, 5, 6), (7, 4, 6)]);
        let c = t.cycles()[0].clone();
        assert_eq!(
            goddyn_construct(&g, &t, &c, BuilderOptions::default()),
            Err(BuilderError::HasBridge(alloc::vec![EdgeId(4)]))
        );
    }

    #[test]
    fn verify_cover_examples() {
        let (g, t) = setup(TRI);
        let c = t.cycles()[0].clone();
        assert!(verify_cover(&g, &[c.clone(), c.clone()], Some(&c), CoverSource::Oracle).unwrap().passes());
        let one = verify_cover(&g, &[c.clone()], Some(&c), CoverSource::Oracle).unwrap();
        assert_eq!(
            one.verdict,
            Verdict::Fail {
                offending_edges: alloc::vec![EdgeId(1), EdgeId(2), EdgeId(3)],
                missing_required: false
            }
        );
        let (g, _) = setup(THETA);
        let cover = [cyc(&g, &[1, 2]), cyc(&g, &[1, 3]), cyc(&g, &[2, 3])];
        assert!(verify_cover(&g, &cover, Some(&cover[0]), CoverSource::Oracle).unwrap().passes());
        let (g, t) = setup(K4);
        let tris: Vec<CycleBody> = t.cycles().iter().filter(|c| c.len() == 3).cloned().collect();
        assert!(verify_cover(&g, &tris, None, CoverSource::Oracle).unwrap().passes());
        let (h, _) = setup(TRI);
        let foreign = CycleBody::from_edges(&h, &[EdgeId(1), EdgeId(2), EdgeId(3)]).unwrap();
        assert_eq!(
            verify_cover(&g, &[foreign], None, CoverSource::Oracle),
            Err(CoverError::NotACycle { index: 0 })
        );
    }

    #[test]
    fn even_subgraph_decomposition() {
        let (g, _) = setup(&[(1, 1, 2), (2, 2, 3), (3, 1, 3), (4, 3, 4), (5, 4, 5), (6, 3, 5)]);
        let parts = decompose_even(&g, g.edges()).unwrap();
        assert_eq!(parts.len(), 2);
        assert!(decompose_even(&g, &[EdgeId(1), EdgeId(2)]).is_none());
    }
}
