//! JSON renderings of core results, the table view, and counterexample
//! decoding for replay.

use cdc_core::audit::{
    AuditConfig, AuditRecord, AuditReport, ClaimId, Counterexample, Discrepancy, Instance, OracleStatus, Status,
    OUT_OF_SCOPE, READINGS,
};
use cdc_core::cycles::{CycleBody, CycleTable, CyclicCore};
use cdc_core::goddyn::{CoverCertificate, CoverSource, FailureReason, GeneratorCertificate, Outcome, StepKind, Verdict};
use cdc_core::linalg::{RankCertificate, Rational};
use cdc_core::oracle::OracleResult;
use cdc_core::segments::SegmentAtlas;
use cdc_core::signlab::{CdimCertificate, SignLabeling};
use cdc_core::{EdgeId, MultiGraph, VertexId, Walk};
use serde_json::{json, Map, Value};

use crate::mel;

pub fn edge_ids(es: &[EdgeId]) -> Value {
    es.iter().map(|e| e.0).collect()
}

pub fn vertex_ids(vs: &[VertexId]) -> Value {
    vs.iter().map(|v| v.0).collect()
}

pub fn rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn graph(g: &MultiGraph) -> Value {
    json!({
        "vertices": vertex_ids(g.vertices()),
        "edges": g.edge_triples().map(|(e, u, v)| json!([e.0, u.0, v.0])).collect::<Vec<_>>(),
        "mel": mel::write(g),
    })
}

pub fn walk(w: &Walk) -> Value {
    json!({ "vertices": vertex_ids(w.vertices()), "edges": edge_ids(w.edges()) })
}

fn body(es: &[EdgeId], vs: &[VertexId]) -> Value {
    json!({ "edges": edge_ids(es), "vertices": vertex_ids(vs) })
}

fn cycle(c: &CycleBody) -> Value {
    body(c.edges(), c.vertices())
}

fn core(c: &CyclicCore) -> Value {
    json!({
        "edges": edge_ids(c.core.edges()),
        "vertices": vertex_ids(c.core.vertices()),
        "degc": c.degc.iter().map(|(v, d)| json!([v.0, d])).collect::<Vec<_>>(),
    })
}

pub fn analyze(g: &MultiGraph, table: &CycleTable, cc: &CyclicCore) -> Value {
    let comps = g.connected_components();
    json!({
        "graph": graph(g),
        "vertex_count": g.vertex_count(),
        "edge_count": g.edge_count(),
        "connected": g.is_connected(),
        "bridgeless": g.is_bridgeless(),
        "components": {
            "partition": comps.partition.iter().map(|p| vertex_ids(p)).collect::<Vec<_>>(),
            "total": comps.n_total,
            "with_edge": comps.n_with_edge,
        },
        "bridges": edge_ids(&g.bridges()),
        "cycle_count": table.len(),
        "circuit_rank": g.circuit_rank(),
        "cyclic_core": core(cc),
    })
}

fn labeling(f: &SignLabeling) -> Value {
    json!({
        "edges": edge_ids(f.edges()),
        "rows": f.cycles().iter().enumerate().map(|(i, c)| json!({
            "cycle": edge_ids(c.edges()),
            "labels": f.row(i).to_vec(),
        })).collect::<Vec<_>>(),
    })
}

fn rank(r: &RankCertificate) -> Value {
    json!({
        "rank": r.rank,
        "basis_rows": r.basis_rows,
        "dependencies": r.dependencies.iter().map(|(row, coeffs)| json!({
            "row": row,
            "coefficients": coeffs.iter().map(rational).collect::<Vec<_>>(),
        })).collect::<Vec<_>>(),
    })
}

pub fn cdim(g: &MultiGraph, cert: &CdimCertificate) -> Value {
    json!({
        "value": cert.value(),
        "lower_bound": cert.lower_bound,
        "upper_bound": cert.upper_bound,
        "complete": cert.is_complete(),
        "brute_force": cert.brute_force,
        "circuit_rank": g.circuit_rank(),
        "witness": labeling(&cert.witness),
        "witness_rank": rank(&cert.witness_rank),
    })
}

pub fn atlas(a: &SegmentAtlas) -> Value {
    json!({
        "cyclic_core": core(&a.core),
        "generic": vertex_ids(&a.generic),
        "path_segments": a.path_segments.iter().map(walk).collect::<Vec<_>>(),
        "cycle_segments": a.cycle_segments.iter().map(|h| body(h.edges(), h.vertices())).collect::<Vec<_>>(),
        "reduced": {
            "graph": graph(&a.reduced.graph),
            "segments": a.reduced.segments.iter().enumerate().map(|(i, w)| json!({
                "edge": a.reduced.graph.edges()[i].0,
                "segment": walk(w),
            })).collect::<Vec<_>>(),
        },
        "components": {
            "classes": a.components.classes.iter().map(|c| edge_ids(c.edges())).collect::<Vec<_>>(),
            "non_core_edges": edge_ids(&a.components.non_core_edges),
            "bridges": edge_ids(&a.components.bridges),
        },
        "strong_cyclic": a.strong_cyclic,
        "cycle_separable": a.cycle_separable,
        "cactus_free": a.cactus_free,
        "leaf_cycles": a.leaf_cycles.iter().map(cycle).collect::<Vec<_>>(),
    })
}

fn reason(r: &FailureReason) -> Value {
    match r {
        FailureReason::PreconditionLost { bridges } => json!({ "kind": "precondition_lost", "bridges": edge_ids(bridges) }),
        FailureReason::NotCactusFree => json!({ "kind": "not_cactus_free" }),
        FailureReason::NoCompanion => json!({ "kind": "no_companion" }),
        FailureReason::HatNotCycle => json!({ "kind": "hat_not_cycle" }),
        FailureReason::Uncertified => json!({ "kind": "uncertified" }),
        FailureReason::Multiplicity { edges } => json!({ "kind": "multiplicity", "edges": edge_ids(edges) }),
        FailureReason::SignConflict { t } => json!({ "kind": "sign_conflict", "t": t }),
        FailureReason::NotGenerator { members, cdim } => {
            json!({ "kind": "not_generator", "members": members, "cdim": cdim })
        }
    }
}

fn kind(k: StepKind) -> &'static str {
    match k {
        StepKind::Base1 => "base1",
        StepKind::Base2 => "base2",
        StepKind::Recurse => "recurse",
        StepKind::Split => "split",
    }
}

fn opt_ids(es: &Option<Vec<EdgeId>>) -> Value {
    es.as_deref().map_or(Value::Null, edge_ids)
}

pub fn generator_certificate(cert: &GeneratorCertificate) -> Value {
    let outcome = match &cert.outcome {
        Outcome::Success => json!({ "status": "success" }),
        Outcome::Failure { step, reason: r } => json!({ "status": "failure", "step": step, "reason": reason(r) }),
    };
    let generator = cert.generator.as_ref().map_or(Value::Null, |g| {
        json!({
            "members": g.members.iter().map(|c| edge_ids(c.edges())).collect::<Vec<_>>(),
            "signs": g.signs,
            "partial_sums": g.partial_sums_targets.iter().map(|h| edge_ids(h.edges())).collect::<Vec<_>>(),
            "characteristic": g.characteristic.iter().map(|(e, k)| json!([e.0, k])).collect::<Vec<_>>(),
            "max_multiplicity": g.max_multiplicity(),
        })
    });
    json!({
        "cycle": cycle(&cert.cycle),
        "outcome": outcome,
        "generator": generator,
        "prime_signs": cert.prime_signs,
        "choices_tried": cert.choices_tried,
        "trace": cert.trace.iter().map(|s| json!({
            "depth": s.depth,
            "kind": kind(s.kind),
            "offset": s.offset,
            "graph_edges": edge_ids(&s.graph_edges),
            "graph_vertices": s.graph_vertices,
            "cdim": s.cdim,
            "m": s.m(),
            "cycle": edge_ids(&s.cycle),
            "path_segment": opt_ids(&s.path_segment),
            "companion": opt_ids(&s.companion),
            "c_hat": opt_ids(&s.c_hat),
            "components": s.components.iter().map(|c| edge_ids(c)).collect::<Vec<_>>(),
        })).collect::<Vec<_>>(),
    })
}

pub fn cover(c: &CoverCertificate) -> Value {
    let (verdict, offending, missing) = match &c.verdict {
        Verdict::Pass => ("pass", Vec::new(), false),
        Verdict::Fail { offending_edges, missing_required } => ("fail", offending_edges.clone(), *missing_required),
    };
    json!({
        "cycles": c.cycles.iter().map(|b| edge_ids(b.edges())).collect::<Vec<_>>(),
        "multiplicity": c.multiplicity.iter().map(|(e, k)| json!([e.0, k])).collect::<Vec<_>>(),
        "contains_required": c.contains_required,
        "source": match c.source { CoverSource::Builder => "builder", CoverSource::Oracle => "oracle" },
        "verdict": verdict,
        "offending_edges": edge_ids(&offending),
        "missing_required": missing,
    })
}

pub fn oracle(r: &OracleResult) -> Value {
    json!({
        "status": if r.cover.is_some() { "found" } else { "exhaustive_none" },
        "nodes": r.nodes,
        "cover": r.cover.as_ref().map_or(Value::Null, cover),
    })
}

fn status(s: &Status) -> &'static str {
    match s {
        Status::Pass => "pass",
        Status::Fail => "fail",
        Status::NotApplicable => "not_applicable",
    }
}

pub fn instance(i: &Instance) -> Value {
    json!({
        "edge_sets": i.edge_sets.iter().map(|s| edge_ids(s)).collect::<Vec<_>>(),
        "walk": i.walk.as_ref().map_or(Value::Null, walk),
        "vertices": vertex_ids(&i.vertices),
        "param": i.param,
    })
}

pub fn counterexample(c: &Counterexample) -> Value {
    json!({
        "claim": c.claim.as_str(),
        "graph": mel::write(&c.graph),
        "instance": instance(&c.instance),
        "detail": c.detail,
    })
}

fn record(r: &AuditRecord) -> Value {
    let mut m = Map::new();
    m.insert("graph".into(), json!(r.graph));
    m.insert("claim".into(), json!(r.claim.as_str()));
    m.insert("status".into(), json!(status(&r.status)));
    m.insert("instances".into(), json!(r.instances));
    m.insert("failing".into(), json!(r.failing));
    if let Some(n) = &r.note {
        m.insert("note".into(), json!(n));
    }
    if let Some(w) = &r.witness {
        m.insert("witness".into(), instance(w));
    }
    if let Some(c) = &r.counterexample {
        m.insert("counterexample".into(), counterexample(c));
    }
    Value::Object(m)
}

fn discrepancy(d: &Discrepancy) -> Value {
    let (oracle, note) = match &d.oracle {
        OracleStatus::Found => ("found", None),
        OracleStatus::ExhaustiveNone => ("exhaustive_none", None),
        OracleStatus::Skipped(why) => ("skipped", Some(why.clone())),
    };
    json!({ "graph": d.graph, "cycle": edge_ids(&d.cycle), "builder": d.builder, "oracle": oracle, "oracle_note": note })
}

/// Corpus description carried into the audit header.
pub struct AuditMeta {
    pub max_edges: usize,
    pub named: bool,
    pub extra_files: Vec<String>,
}

pub fn audit(report: &AuditReport, config: &AuditConfig, meta: &AuditMeta) -> Value {
    let mut summary = Map::new();
    for (c, s) in report.summary() {
        summary.insert(
            c.as_str().into(),
            json!({
                "graphs_applicable": s.graphs_applicable,
                "instances": s.instances,
                "pass": s.pass,
                "fail": s.fail,
                "not_applicable": s.not_applicable,
            }),
        );
    }
    json!({
        "corpus": {
            "max_edges": meta.max_edges,
            "named": meta.named,
            "extra_files": meta.extra_files,
            "graphs": report.graphs,
        },
        "config": {
            "max_cycles": config.max_cycles,
            "brute_force_cap": config.brute_force_cap,
            "oracle_cap": config.oracle_cap,
            "subset_edge_limit": config.subset_edge_limit,
            "path_cap": config.path_cap,
            "oracle": config.run_oracle,
            "exhaustive_builder": config.exhaustive_builder,
        },
        "registry": ClaimId::ALL.iter().map(|c| json!({ "id": c.as_str(), "statement": c.statement() })).collect::<Vec<_>>(),
        "out_of_scope": OUT_OF_SCOPE.iter().map(|(id, note)| json!({ "id": id, "note": note })).collect::<Vec<_>>(),
        "readings": READINGS.iter().map(|(id, r)| json!({ "id": id, "reading": r })).collect::<Vec<_>>(),
        "summary": summary,
        "findings": report.has_findings(),
        "contradictions": report.contradictions,
        "discrepancies": report.discrepancies.iter().map(discrepancy).collect::<Vec<_>>(),
        "records": report.records.iter().map(record).collect::<Vec<_>>(),
    })
}

/// Wraps a command payload with the envelope shared by every report.
pub fn envelope(command: &str, results: Vec<(String, Value)>) -> Value {
    json!({
        "command": command,
        "results": results.into_iter().map(|(name, v)| json!({ "input": name, "report": v })).collect::<Vec<_>>(),
    })
}

fn ids_from<T>(v: &Value, wrap: fn(u32) -> T) -> Option<Vec<T>> {
    v.as_array()?
        .iter()
        .map(|x| x.as_u64().and_then(|n| u32::try_from(n).ok()).map(wrap))
        .collect()
}

/// Inverse of [`counterexample`].
pub fn counterexample_from_json(v: &Value) -> Option<Counterexample> {
    let claim = ClaimId::parse(v.get("claim")?.as_str()?)?;
    let graph = mel::parse(v.get("graph")?.as_str()?).ok()?;
    let inst = v.get("instance")?;
    let edge_sets = inst
        .get("edge_sets")?
        .as_array()?
        .iter()
        .map(|s| ids_from(s, EdgeId))
        .collect::<Option<Vec<_>>>()?;
    let walk = match inst.get("walk")? {
        Value::Null => None,
        w => Some(Walk::new(ids_from(w.get("vertices")?, VertexId)?, ids_from(w.get("edges")?, EdgeId)?).ok()?),
    };
    let param = match inst.get("param")? {
        Value::Null => None,
        p => Some(usize::try_from(p.as_u64()?).ok()?),
    };
    Some(Counterexample {
        claim,
        graph,
        instance: Instance {
            edge_sets,
            walk,
            vertices: ids_from(inst.get("vertices")?, VertexId)?,
            param,
        },
        detail: v.get("detail")?.as_str()?.into(),
    })
}

/// One `path = value` line per scalar leaf; arrays of scalars stay inline.
pub fn table(v: &Value) -> String {
    let mut out = String::new();
    flatten(v, "", &mut out);
    out
}

fn flatten(v: &Value, path: &str, out: &mut String) {
    let scalar = |x: &Value| !x.is_object() && !x.is_array();
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                let p = if path.is_empty() { k.clone() } else { format!("{path}.{k}") };
                flatten(x, &p, out);
            }
        }
        Value::Array(a) if !a.iter().all(scalar) => {
            for (i, x) in a.iter().enumerate() {
                flatten(x, &format!("{path}[{i}]"), out);
            }
        }
        Value::String(s) if s.contains('\n') => {
            for (i, line) in s.lines().enumerate() {
                out.push_str(&format!("{path}#{i} = {line}\n"));
            }
        }
        _ => out.push_str(&format!("{path} = {v}\n")),
    }
}
