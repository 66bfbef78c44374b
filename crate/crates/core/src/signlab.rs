//! Sign labelings, label vectors and the certified cyclic dimension.
//!
//! The cyclic dimension is the minimum, over all sign labelings, of the
//! dimension spanned by the label vectors. It is certified by a sandwich: the
//! GF(2) rank of the cycle/edge incidence matrix is a lower bound for every
//! labeling (a ±1/0 matrix has a nonzero minor over Q wherever it has one
//! mod 2), and the orientation labeling gives an explicit upper bound.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use thiserror::Error;

use crate::cycles::{CycleBody, CycleTable};
use crate::graph::{EdgeId, MultiGraph};
use crate::linalg::{gf2_rank, rank_exact, rank_of, RankCertificate};

/// Default cap on cycle/edge incidences for the literal minimisation.
pub const DEFAULT_BRUTE_FORCE_INCIDENCES: usize = 24;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LabelError {
    #[error("label value {value} at cycle {cycle}, edge {edge} violates the support condition")]
    Support { cycle: usize, edge: EdgeId, value: i8 },
    #[error("expected {expected} label rows, got {got}")]
    Shape { expected: usize, got: usize },
    #[error("{incidences} cycle/edge incidences exceed the brute-force cap of {cap}")]
    BruteForceCap { incidences: usize, cap: usize },
    #[error("labeling is not optimal (span dimension {span} > cyclic dimension {cdim})")]
    NotOptimal { span: usize, cdim: usize },
    #[error("cyclic dimension certificate is incomplete ({lower}..={upper})")]
    Incomplete { lower: usize, upper: usize },
}

/// The vector `f(C)` as its nonzero entries.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LabelVector {
    pub entries: BTreeMap<EdgeId, i8>,
}

/// A map `cycle(G) × E → {−1, 0, +1}` that is nonzero exactly on incidences.
///
/// Rows follow the canonical cycle order of the table it was built from and
/// columns follow the host's edge order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignLabeling {
    edges: Vec<EdgeId>,
    cycles: Vec<CycleBody>,
    values: Vec<Vec<i8>>,
}

impl SignLabeling {
    /// Validates the support condition.
    pub fn new(host: &MultiGraph, cycles: Vec<CycleBody>, values: Vec<Vec<i8>>) -> Result<Self, LabelError> {
        if values.len() != cycles.len() {
            return Err(LabelError::Shape {
                expected: cycles.len(),
                got: values.len(),
            });
        }
        for (ci, (c, row)) in cycles.iter().zip(&values).enumerate() {
            if row.len() != host.edge_count() {
                return Err(LabelError::Shape {
                    expected: host.edge_count(),
                    got: row.len(),
                });
            }
            for (&e, &x) in host.edges().iter().zip(row) {
                let ok = matches!(x, -1 | 1) == c.contains_edge(e) && matches!(x, -1..=1);
                if !ok {
                    return Err(LabelError::Support { cycle: ci, edge: e, value: x });
                }
            }
        }
        Ok(Self {
            edges: host.edges().to_vec(),
            cycles,
            values,
        })
    }

    pub fn cycles(&self) -> &[CycleBody] {
        &self.cycles
    }

    pub fn edges(&self) -> &[EdgeId] {
        &self.edges
    }

    pub fn row(&self, ci: usize) -> &[i8] {
        &self.values[ci]
    }

    pub fn value(&self, ci: usize, e: EdgeId) -> i8 {
        self.edges.binary_search(&e).map_or(0, |i| self.values[ci][i])
    }

    pub fn index_of(&self, c: &CycleBody) -> Option<usize> {
        self.cycles.binary_search(c).ok()
    }

    pub fn vector(&self, ci: usize) -> LabelVector {
        LabelVector {
            entries: self
                .edges
                .iter()
                .zip(&self.values[ci])
                .filter(|(_, &x)| x != 0)
                .map(|(&e, &x)| (e, x))
                .collect(),
        }
    }

    /// Rows as integer vectors for the rank routines.
    pub fn rows(&self) -> Vec<Vec<i64>> {
        self.values
            .iter()
            .map(|r| r.iter().map(|&x| i64::from(x)).collect())
            .collect()
    }

    pub fn span_dimension(&self) -> usize {
        rank_of(&self.rows())
    }

    pub fn rank_certificate(&self) -> RankCertificate {
        rank_exact(&self.rows())
    }

    /// Negates `f(C)` for one cycle.
    pub fn with_flipped_cycle(&self, ci: usize) -> Self {
        let mut out = self.clone();
        out.values[ci].iter_mut().for_each(|x| *x = -*x);
        out
    }

    /// Negates every label on one edge.
    pub fn with_flipped_edge(&self, e: EdgeId) -> Self {
        let mut out = self.clone();
        if let Ok(i) = self.edges.binary_search(&e) {
            out.values.iter_mut().for_each(|r| r[i] = -r[i]);
        }
        out
    }

    /// The restriction `f|cycle(H) × E_H` to a subgraph `h` of the host.
    pub fn restrict(&self, host: &MultiGraph, h: &MultiGraph) -> SignLabeling {
        let cols: Vec<usize> = h
            .edges()
            .iter()
            .filter_map(|&e| self.edges.binary_search(&e).ok())
            .collect();
        let mut cycles = Vec::new();
        let mut values = Vec::new();
        for (c, row) in self.cycles.iter().zip(&self.values) {
            if c.lies_in(host, h) {
                cycles.push(c.clone());
                values.push(cols.iter().map(|&i| row[i]).collect());
            }
        }
        SignLabeling {
            edges: cols.iter().map(|&i| self.edges[i]).collect(),
            cycles,
            values,
        }
    }

    /// `Σ coeff_i · f(C_i)` over the given rows.
    pub fn combination(&self, terms: &[(usize, i64)]) -> Vec<i64> {
        let mut acc = alloc::vec![0i64; self.edges.len()];
        for &(ci, k) in terms {
            for (a, &x) in acc.iter_mut().zip(&self.values[ci]) {
                *a += k * i64::from(x);
            }
        }
        acc
    }
}

/// Orientation labeling: every edge is oriented from its smaller to its
/// larger endpoint and each cycle is traversed canonically; the label is +1
/// where the traversal follows the orientation. Loops get +1.
pub fn orientation_labeling(g: &MultiGraph, table: &CycleTable) -> SignLabeling {
    let values = table
        .cycles()
        .iter()
        .map(|c| {
            let mut row = alloc::vec![0i8; g.edge_count()];
            let w = c.walk(g);
            for (i, &e) in w.edges().iter().enumerate() {
                let from = w.vertices()[i];
                let (u, _) = g.endpoints(e).unwrap();
                row[g.edge_index(e).unwrap()] = if from == u { 1 } else { -1 };
            }
            row
        })
        .collect();
    SignLabeling {
        edges: g.edges().to_vec(),
        cycles: table.cycles().to_vec(),
        values,
    }
}

/// Certified cyclic dimension.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CdimCertificate {
    /// GF(2) rank of the cycle/edge incidence matrix.
    pub lower_bound: usize,
    /// Span dimension of [`CdimCertificate::witness`].
    pub upper_bound: usize,
    pub witness: SignLabeling,
    pub witness_rank: RankCertificate,
    pub brute_force: Option<usize>,
}

impl CdimCertificate {
    /// The certified value, when the bounds meet or brute force settled it.
    pub fn value(&self) -> Option<usize> {
        if self.lower_bound == self.upper_bound {
            Some(self.lower_bound)
        } else {
            self.brute_force
        }
    }

    pub fn is_complete(&self) -> bool {
        self.value().is_some()
    }

    /// Re-checks the internal consistency of the certificate.
    pub fn verify(&self, table: &CycleTable) -> bool {
        let masks: Vec<_> = (0..table.len()).map(|i| table.edge_mask(i).clone()).collect();
        gf2_rank(&masks) == self.lower_bound
            && self.witness.span_dimension() == self.upper_bound
            && self.witness_rank.rank == self.upper_bound
            && self.witness_rank.verify(&self.witness.rows())
            && self.brute_force.map_or(true, |b| self.lower_bound <= b && b <= self.upper_bound)
    }
}

/// Cyclic dimension via the GF(2)/orientation sandwich.
///
/// Brute force runs when `force_brute_force` is set or the bounds disagree,
/// and only if the incidence count is within `brute_force_cap`.
pub fn cdim(g: &MultiGraph, table: &CycleTable, brute_force_cap: usize, force_brute_force: bool) -> CdimCertificate {
    let masks: Vec<_> = (0..table.len()).map(|i| table.edge_mask(i).clone()).collect();
    let lower_bound = gf2_rank(&masks);
    let witness = orientation_labeling(g, table);
    let witness_rank = witness.rank_certificate();
    let upper_bound = witness_rank.rank;
    let brute_force = if force_brute_force || lower_bound != upper_bound {
        cdim_bruteforce(g, table, brute_force_cap).ok()
    } else {
        None
    };
    CdimCertificate {
        lower_bound,
        upper_bound,
        witness,
        witness_rank,
        brute_force,
    }
}

/// Literal minimisation of the span dimension over all sign labelings.
///
/// The sign of each cycle's first edge is fixed to +1, since negating a whole
/// label vector does not change the span.
pub fn cdim_bruteforce(g: &MultiGraph, table: &CycleTable, cap: usize) -> Result<usize, LabelError> {
    let incidences = table.incidences();
    if incidences > cap {
        return Err(LabelError::BruteForceCap { incidences, cap });
    }
    if table.is_empty() {
        return Ok(0);
    }
    let cols: Vec<Vec<usize>> = table
        .cycles()
        .iter()
        .map(|c| c.edges().iter().map(|&e| g.edge_index(e).unwrap()).collect())
        .collect();
    let free: usize = cols.iter().map(|c| c.len() - 1).sum();
    let mut rows: Vec<Vec<i64>> = cols
        .iter()
        .map(|c| {
            let mut r = alloc::vec![0i64; g.edge_count()];
            c.iter().for_each(|&i| r[i] = 1);
            r
        })
        .collect();
    let mut best = usize::MAX;
    for mask in 0u64..(1u64 << free) {
        let mut bit = 0;
        for (r, c) in rows.iter_mut().zip(&cols) {
            for &i in &c[1..] {
                r[i] = if mask >> bit & 1 == 1 { -1 } else { 1 };
                bit += 1;
            }
        }
        best = best.min(rank_of(&rows));
    }
    Ok(best)
}

/// Whether `dim span f(cycle(G))` equals the certified cyclic dimension.
pub fn is_optimal(f: &SignLabeling, cert: &CdimCertificate) -> Result<bool, LabelError> {
    let value = cert.value().ok_or(LabelError::Incomplete {
        lower: cert.lower_bound,
        upper: cert.upper_bound,
    })?;
    Ok(f.span_dimension() == value)
}

/// Checks that `f(C1)` and `f(C2)` restricted to each connected component of
/// `C1 ∩ C2` that has an edge span the same line. A zero restriction counts
/// as parallel to everything.
pub fn parallel_restriction_check(
    g: &MultiGraph,
    f: &SignLabeling,
    cert: &CdimCertificate,
    c1: usize,
    c2: usize,
) -> Result<bool, LabelError> {
    let span = f.span_dimension();
    match cert.value() {
        Some(v) if v == span => {}
        Some(v) => return Err(LabelError::NotOptimal { span, cdim: v }),
        None => {
            return Err(LabelError::Incomplete {
                lower: cert.lower_bound,
                upper: cert.upper_bound,
            })
        }
    }
    let a = f.cycles()[c1].graph(g);
    let b = f.cycles()[c2].graph(g);
    let common = a.intersection(&b).expect("subgraphs of one host");
    let labels = common.component_labels();
    let comps = labels.iter().copied().max().map_or(0, |m| m + 1);
    for k in 0..comps {
        let edges: Vec<EdgeId> = common
            .edge_triples()
            .filter(|&(_, u, _)| labels[common.vertex_index(u).unwrap()] == k)
            .map(|(e, _, _)| e)
            .collect();
        if edges.is_empty() {
            continue;
        }
        let u1: Vec<i64> = edges.iter().map(|&e| i64::from(f.value(c1, e))).collect();
        let u2: Vec<i64> = edges.iter().map(|&e| i64::from(f.value(c2, e))).collect();
        if !parallel(&u1, &u2) {
            return Ok(false);
        }
    }
    Ok(true)
}

fn parallel(u1: &[i64], u2: &[i64]) -> bool {
    let z1 = u1.iter().all(|&x| x == 0);
    let z2 = u2.iter().all(|&x| x == 0);
    if z1 || z2 {
        return true;
    }
    rank_of(&[u1.to_vec(), u2.to_vec()]) == 1
}

/// An ordered cycle family `{C_i}` with signs `s(C_i)`, the partial-sum
/// targets `C'_t` and the characteristic map.
///
/// Targets are even subgraphs; each is a single cycle body when the family
/// stays inside one cycle component.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    pub members: Vec<CycleBody>,
    pub signs: Vec<i8>,
    pub partial_sums_targets: Vec<MultiGraph>,
    pub characteristic: BTreeMap<EdgeId, u32>,
}

impl Generator {
    /// Builds a generator from members and signs; targets are the GF(2)
    /// partial sums and the characteristic map counts member incidences.
    pub fn from_members(host: &MultiGraph, members: Vec<CycleBody>, signs: Vec<i8>) -> Self {
        let mut characteristic: BTreeMap<EdgeId, u32> = host.edges().iter().map(|&e| (e, 0)).collect();
        let mut parity: BTreeMap<EdgeId, bool> = BTreeMap::new();
        let mut targets = Vec::with_capacity(members.len());
        for c in &members {
            for &e in c.edges() {
                *characteristic.entry(e).or_insert(0) += 1;
                let p = parity.entry(e).or_insert(false);
                *p = !*p;
            }
            targets.push(host.edge_subgraph(parity.iter().filter(|(_, &b)| b).map(|(&e, _)| e)));
        }
        Self {
            members,
            signs,
            partial_sums_targets: targets,
            characteristic,
        }
    }

    /// `C'_t` as a cycle body, when the target is one.
    pub fn target_cycle(&self, host: &MultiGraph, t: usize) -> Option<CycleBody> {
        CycleBody::from_edges(host, self.partial_sums_targets[t].edges()).ok()
    }

    pub fn max_multiplicity(&self) -> u32 {
        self.characteristic.values().copied().max().unwrap_or(0)
    }
}

/// Whether `A` has `cdim(G)` members whose label vectors span all of
/// `f(cycle(G))`.
pub fn is_f_generator(members: &[CycleBody], f: &SignLabeling, cert: &CdimCertificate) -> Result<bool, LabelError> {
    let value = cert.value().ok_or(LabelError::Incomplete {
        lower: cert.lower_bound,
        upper: cert.upper_bound,
    })?;
    if members.len() != value {
        return Ok(false);
    }
    let mut rows = Vec::with_capacity(members.len());
    for m in members {
        match f.index_of(m) {
            Some(i) => rows.push(f.rows()[i].clone()),
            None => return Ok(false),
        }
    }
    let own = rank_of(&rows);
    rows.extend(f.rows());
    Ok(rank_of(&rows) == own)
}
