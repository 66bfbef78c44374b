use std::collections::{BTreeMap, BTreeSet};
use std::time::{Duration, Instant};

use cdc_core::audit::{audit_claim, replay, AuditConfig, ClaimId, Context, OracleStatus, Status};
use cdc_core::corpus::{corpus_generate, Corpus, DEFAULT_EDGE_LIMIT};
use cdc_core::cycles::{CycleBody, CycleTable, DEFAULT_MAX_CYCLES};
use cdc_core::goddyn::{assemble_cover, goddyn_construct, BuilderOptions, CoverCertificate, Outcome};
use cdc_core::linalg::rank_exact;
use cdc_core::oracle::{oracle_cdc, DEFAULT_ORACLE_CAP};
use cdc_core::signlab::{cdim, cdim_bruteforce, DEFAULT_BRUTE_FORCE_INCIDENCES};
use cdc_core::{EdgeId, MultiGraph};
use cdc_workbench::cli::{audit_parallel, run};
use cdc_workbench::report;
use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const WIDE_TIER: usize = 10;
const AUDIT_TIER: usize = 8;

fn corpus(max_edges: usize) -> Corpus {
    corpus_generate(max_edges, true, DEFAULT_EDGE_LIMIT).unwrap()
}

fn verdict(n: u32, what: &str, ok: bool, detail: String) {
    println!("criterion {n} {}: {what} ({detail})", if ok { "PASS" } else { "FAIL" });
    assert!(ok, "criterion {n} failed: {detail}");
}

/// Cycles by brute force: edge subsets whose edge-induced subgraph is
/// connected with every degree equal to 2.
fn subset_cycles(g: &MultiGraph) -> BTreeSet<Vec<EdgeId>> {
    let triples: Vec<(EdgeId, u32, u32)> = g.edge_triples().map(|(e, u, v)| (e, u.0, v.0)).collect();
    let m = triples.len();
    let mut out = BTreeSet::new();
    for mask in 1u64..(1u64 << m) {
        let chosen: Vec<&(EdgeId, u32, u32)> = (0..m).filter(|i| mask >> i & 1 == 1).map(|i| &triples[i]).collect();
        let mut deg: BTreeMap<u32, usize> = BTreeMap::new();
        for &&(_, u, v) in &chosen {
            *deg.entry(u).or_default() += 1;
            *deg.entry(v).or_default() += 1;
        }
        if deg.values().any(|&d| d != 2) {
            continue;
        }
        let mut seen = BTreeSet::from([chosen[0].1]);
        let mut grew = true;
        while grew {
            grew = false;
            for &&(_, u, v) in &chosen {
                if seen.contains(&u) != seen.contains(&v) {
                    seen.insert(u);
                    seen.insert(v);
                    grew = true;
                }
            }
        }
        if seen.len() == deg.len() {
            out.insert(chosen.iter().map(|t| t.0).collect());
        }
    }
    out
}

fn is_cycle_edge_set(g: &MultiGraph, es: &[EdgeId]) -> bool {
    let sub = g.edge_subgraph(es.iter().copied());
    subset_cycles(&sub).contains(&es.to_vec())
}

/// Independent cover check: every member a cycle, every edge exactly twice,
/// the required cycle present.
fn cover_is_valid(g: &MultiGraph, cover: &CoverCertificate, required: &CycleBody) -> bool {
    let mut count: BTreeMap<EdgeId, u32> = BTreeMap::new();
    for c in &cover.cycles {
        if !is_cycle_edge_set(g, c.edges()) {
            return false;
        }
        for &e in c.edges() {
            *count.entry(e).or_default() += 1;
        }
    }
    g.edges().iter().all(|e| count.get(e) == Some(&2))
        && count.len() == g.edge_count()
        && cover.cycles.iter().any(|c| c.edges() == required.edges())
}

fn naive_rank(rows: &[Vec<i64>]) -> usize {
    let mut m: Vec<Vec<Ratio<i64>>> = rows.iter().map(|r| r.iter().map(|&x| Ratio::from_integer(x)).collect()).collect();
    let cols = m.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..m.len()).find(|&i| m[i][c] != Ratio::from_integer(0)) else { continue };
        m.swap(rank, p);
        for i in 0..m.len() {
            if i != rank && m[i][c] != Ratio::from_integer(0) {
                let f = m[i][c] / m[rank][c];
                for j in 0..cols {
                    let d = f * m[rank][j];
                    m[i][j] -= d;
                }
            }
        }
        rank += 1;
    }
    rank
}

fn random_multigraph(rng: &mut ChaCha8Rng, max_edges: usize) -> MultiGraph {
    let n = rng.gen_range(1..=7u32);
    let m = rng.gen_range(0..=max_edges);
    let edges: Vec<(u32, u32, u32)> = (0..m as u32).map(|e| (e * 3 + 1, rng.gen_range(0..n), rng.gen_range(0..n))).collect();
    let vertices: Vec<u32> = (0..n).collect();
    MultiGraph::from_parts(&vertices, &edges).unwrap()
}

#[test]
fn criterion_1_golden_cyclic_dimensions() {
    let start = Instant::now();
    let named = corpus(0);
    let mut bad = Vec::new();
    for (name, want, bf) in [("triangle", 1, true), ("theta", 2, true), ("K4", 3, true), ("petersen", 6, false)] {
        let g = named.get(name).unwrap();
        let t = CycleTable::new(g, DEFAULT_MAX_CYCLES).unwrap();
        let cert = cdim(g, &t, DEFAULT_BRUTE_FORCE_INCIDENCES, true);
        let ok = cert.value() == Some(want)
            && cert.lower_bound == cert.upper_bound
            && cert.verify(&t)
            && (!bf || cert.brute_force == Some(want));
        println!("  {name}: {:?} bounds {}..={} brute force {:?}", cert.value(), cert.lower_bound, cert.upper_bound, cert.brute_force);
        if !ok {
            bad.push(name);
        }
    }
    let elapsed = start.elapsed();
    verdict(
        1,
        "golden cdim values with closed sandwich",
        bad.is_empty() && elapsed < Duration::from_secs(10),
        format!("mismatches {bad:?}, {:.2}s", elapsed.as_secs_f64()),
    );
}

#[test]
fn criterion_2_degree_sum_corollary() {
    let start = Instant::now();
    let c = corpus(WIDE_TIER);
    let config = AuditConfig::default();
    let (mut applicable, mut passed, mut replayed, mut bad) = (0, 0, 0, Vec::new());
    for e in &c.graphs {
        let ctx = Context::new(&e.graph, &config).unwrap();
        let rec = audit_claim(&e.name, ClaimId::CorDegc, &ctx, &config);
        if rec.status == Status::NotApplicable {
            continue;
        }
        applicable += 1;
        let core: BTreeSet<EdgeId> = ctx.table.cycles().iter().flat_map(|c| c.edges().iter().copied()).collect();
        let mut deg: BTreeMap<u32, i64> = BTreeMap::new();
        for (edge, u, v) in e.graph.edge_triples() {
            if core.contains(&edge) {
                *deg.entry(u.0).or_default() += 1;
                *deg.entry(v.0).or_default() += 1;
            }
        }
        let lhs: i64 = deg.values().map(|d| d - 2).sum();
        let d = ctx.cert.value().expect("certified") as i64;
        let holds = lhs == 2 * (d - 1);
        match (&rec.status, holds) {
            (Status::Pass, true) => passed += 1,
            (Status::Fail, false) => {
                let cex = rec.counterexample.as_ref().unwrap();
                if replay(cex, &config) == Ok(false) {
                    replayed += 1;
                    println!("  counterexample {}: {}", e.name, cex.detail);
                } else {
                    bad.push(e.name.clone());
                }
            }
            _ => bad.push(e.name.clone()),
        }
    }
    let elapsed = start.elapsed();
    verdict(
        2,
        "degree sum corollary passes or yields replayable counterexamples",
        bad.is_empty() && applicable > 0 && elapsed < Duration::from_secs(300),
        format!(
            "{} graphs, {applicable} applicable, {passed} pass, {replayed} replayed counterexamples, bad {bad:?}, {:.1}s",
            c.len(),
            elapsed.as_secs_f64()
        ),
    );
}

#[test]
fn criterion_3_oracle_ground_truth() {
    let start = Instant::now();
    let c = corpus(WIDE_TIER);
    let (mut pairs, mut found, mut none, mut bad) = (0, 0, 0, Vec::new());
    for e in &c.graphs {
        let g = &e.graph;
        if !g.is_connected() || !g.is_bridgeless() {
            continue;
        }
        let t = CycleTable::new(g, DEFAULT_MAX_CYCLES).unwrap();
        if t.len() > DEFAULT_ORACLE_CAP {
            continue;
        }
        for cyc in t.cycles() {
            pairs += 1;
            let r = oracle_cdc(g, &t, Some(cyc), DEFAULT_ORACLE_CAP).unwrap();
            match &r.cover {
                Some(cover) if cover.passes() && cover_is_valid(g, cover, cyc) => found += 1,
                Some(_) => bad.push((e.name.clone(), cyc.edges().to_vec())),
                None => none += 1,
            }
        }
    }
    let petersen = c.get("petersen").unwrap();
    let t = CycleTable::new(petersen, DEFAULT_MAX_CYCLES).unwrap();
    let p_start = Instant::now();
    let fives: Vec<&CycleBody> = t.cycles().iter().filter(|c| c.len() == 5).collect();
    let mut petersen_ok = fives.len() == 12;
    for cyc in &fives {
        let r = oracle_cdc(petersen, &t, Some(cyc), DEFAULT_ORACLE_CAP).unwrap();
        petersen_ok &= r.cover.as_ref().is_some_and(|cv| cv.passes() && cover_is_valid(petersen, cv, cyc));
    }
    let p_elapsed = p_start.elapsed();
    verdict(
        3,
        "oracle covers verify exactly; Petersen five-cycles covered",
        bad.is_empty() && petersen_ok && p_elapsed < Duration::from_secs(600),
        format!(
            "{pairs} (graph, cycle) pairs: {found} covers, {none} exhaustive-none, bad {bad:?}; Petersen {} five-cycles in {:.2}s; total {:.1}s",
            fives.len(),
            p_elapsed.as_secs_f64(),
            start.elapsed().as_secs_f64()
        ),
    );
}

#[test]
fn criterion_4_builder_audit() {
    let c = corpus(WIDE_TIER);
    let (mut pairs, mut passes, mut failures, mut contradictions, mut bad) = (0, 0, 0, 0, Vec::new());
    let mut table: Vec<serde_json::Value> = Vec::new();
    for e in &c.graphs {
        let g = &e.graph;
        if !g.is_connected() || !g.is_bridgeless() {
            continue;
        }
        let t = CycleTable::new(g, DEFAULT_MAX_CYCLES).unwrap();
        for cyc in t.cycles() {
            pairs += 1;
            let cert = goddyn_construct(g, &t, cyc, BuilderOptions::default()).unwrap();
            let oracle = if t.len() <= DEFAULT_ORACLE_CAP {
                match oracle_cdc(g, &t, Some(cyc), DEFAULT_ORACLE_CAP).unwrap().cover {
                    Some(_) => OracleStatus::Found,
                    None => OracleStatus::ExhaustiveNone,
                }
            } else {
                OracleStatus::Skipped("cycle cap".into())
            };
            match &cert.outcome {
                Outcome::Success => {
                    let cover = assemble_cover(g, &cert);
                    if cover.as_ref().is_some_and(|cv| cv.passes() && cover_is_valid(g, cv, cyc)) {
                        passes += 1;
                    } else {
                        bad.push((e.name.clone(), cyc.edges().to_vec()));
                    }
                    if oracle == OracleStatus::ExhaustiveNone {
                        contradictions += 1;
                    }
                }
                Outcome::Failure { step, reason } => {
                    failures += 1;
                    if *step >= cert.trace.len() {
                        bad.push((e.name.clone(), cyc.edges().to_vec()));
                    }
                    table.push(serde_json::json!({
                        "graph": e.name,
                        "mel": cdc_workbench::mel::write(g),
                        "cycle": report::edge_ids(cyc.edges()),
                        "step": step,
                        "reason": format!("{reason:?}"),
                        "oracle": format!("{oracle:?}"),
                    }));
                }
            }
        }
    }
    let path = std::path::Path::new(env!("CARGO_TARGET_TMPDIR")).join("discrepancies.json");
    std::fs::write(&path, serde_json::to_string_pretty(&table).unwrap()).unwrap();
    let found = table.iter().filter(|r| r["oracle"] == "Found").count();
    verdict(
        4,
        "builder passes verify, failures carry certificates, no contradictions",
        bad.is_empty() && contradictions == 0,
        format!(
            "{pairs} pairs: {passes} verified covers, {failures} failure certificates ({found} with an oracle cover), {contradictions} contradictions, bad {}; table at {}",
            bad.len(),
            path.display()
        ),
    );
}

#[test]
fn criterion_5_proposition_suites() {
    let c = corpus(AUDIT_TIER);
    let config = AuditConfig::default();
    let report_ = audit_parallel(&c.graphs, &config, 1).unwrap();
    let suites = [
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
        ClaimId::CorSegcomp,
    ];
    let summary = report_.summary();
    let uncovered: Vec<&str> = suites.iter().filter(|c| summary[c].instances == 0).map(|c| c.as_str()).collect();
    let vacuous = report_.records.iter().filter(|r| r.status == Status::Pass && r.instances == 0).count();
    let mut unreplayed = Vec::new();
    let mut replayed = 0;
    for r in report_.records.iter().filter(|r| r.status == Status::Fail) {
        let cex = r.counterexample.as_ref().expect("failing record carries a counterexample");
        let decoded = report::counterexample_from_json(&report::counterexample(cex));
        let ok = replay(cex, &config) == Ok(false) && decoded.is_some_and(|d| d == *cex && replay(&d, &config) == Ok(false));
        if ok {
            replayed += 1;
        } else {
            unreplayed.push(format!("{} {}", r.graph, r.claim.as_str()));
        }
    }
    for c in suites {
        let s = &summary[&c];
        println!("  {:11} graphs {:4} instances {:7} pass {:4} fail {:4}", c.as_str(), s.graphs_applicable, s.instances, s.pass, s.fail);
    }
    verdict(
        5,
        "every suite covered; failures replay from their certificates",
        uncovered.is_empty() && vacuous == 0 && unreplayed.is_empty(),
        format!(
            "{} graphs, uncovered {uncovered:?}, vacuous passes {vacuous}, {replayed} counterexamples replayed, not replayed {unreplayed:?}",
            report_.graphs
        ),
    );
}

#[test]
fn criterion_6_kernel_oracles() {
    let c = corpus(WIDE_TIER);
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_cdc);
    let mut graphs: Vec<MultiGraph> = c.graphs.iter().map(|e| e.graph.clone()).collect();
    graphs.extend((0..400).map(|_| random_multigraph(&mut rng, 12)));
    let cycle_mismatch = graphs
        .iter()
        .filter(|g| {
            let t = CycleTable::new(g, DEFAULT_MAX_CYCLES).unwrap();
            let got: BTreeSet<Vec<EdgeId>> = t.cycles().iter().map(|c| c.edges().to_vec()).collect();
            got.len() != t.len() || got != subset_cycles(g)
        })
        .count();

    let mut rank_mismatch = 0;
    for _ in 0..200 {
        let (r, k) = (rng.gen_range(1..=12), rng.gen_range(1..=12));
        let rows: Vec<Vec<i64>> = (0..r).map(|_| (0..k).map(|_| rng.gen_range(-1..=1)).collect()).collect();
        let cert = rank_exact(&rows);
        if cert.rank != naive_rank(&rows) || !cert.verify(&rows) {
            rank_mismatch += 1;
        }
    }

    let (mut bf_checked, mut bf_mismatch) = (0, 0);
    for g in &graphs {
        let t = CycleTable::new(g, DEFAULT_MAX_CYCLES).unwrap();
        if t.incidences() > DEFAULT_BRUTE_FORCE_INCIDENCES {
            continue;
        }
        bf_checked += 1;
        let cert = cdim(g, &t, DEFAULT_BRUTE_FORCE_INCIDENCES, false);
        if cert.value() != cdim_bruteforce(g, &t, DEFAULT_BRUTE_FORCE_INCIDENCES).ok() {
            bf_mismatch += 1;
        }
    }
    verdict(
        6,
        "cycle enumeration, exact rank and cdim sandwich match their oracles",
        cycle_mismatch == 0 && rank_mismatch == 0 && bf_mismatch == 0,
        format!(
            "{} graphs: {cycle_mismatch} cycle mismatches; 200 matrices: {rank_mismatch} rank mismatches; {bf_checked} brute-force instances: {bf_mismatch} cdim mismatches",
            graphs.len()
        ),
    );
}

#[test]
fn criterion_7_deterministic_reports() {
    let tier = AUDIT_TIER.to_string();
    let a = run(["cdcw", "audit", "--max-edges", &tier, "--jobs", "1"]);
    let b = run(["cdcw", "audit", "--max-edges", &tier, "--jobs", "2"]);
    let c = run(["cdcw", "audit", "--max-edges", &tier, "--jobs", "1"]);
    let parsed: serde_json::Value = serde_json::from_str(&a.stdout).unwrap();
    let ok = !a.stdout.is_empty() && a.stdout == b.stdout && a.stdout == c.stdout && parsed["command"] == "audit";
    verdict(
        7,
        "repeated audits are byte-identical",
        ok,
        format!("{} bytes, exit codes {} {} {}", a.stdout.len(), a.code, b.code, c.code),
    );
}
