//! The `cdcw` command line.

use std::ffi::OsString;
use std::path::PathBuf;
use std::time::Instant;

use cdc_core::audit::{AuditConfig, AuditReport};
use cdc_core::corpus::{corpus_generate, CorpusEntry, Provenance, DEFAULT_EDGE_LIMIT};
use cdc_core::cycles::{cyclic_core, CycleBody, CycleError, CycleTable, DEFAULT_MAX_CYCLES};
use cdc_core::goddyn::{assemble_cover, goddyn_construct, BuilderError, BuilderOptions};
use cdc_core::oracle::{oracle_cdc, OracleError, DEFAULT_ORACLE_CAP};
use cdc_core::segments::SegmentAtlas;
use cdc_core::signlab::{cdim, DEFAULT_BRUTE_FORCE_INCIDENCES};
use cdc_core::{EdgeId, MultiGraph};
use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::{mel, report};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_INTERNAL: i32 = 2;
pub const EXIT_FINDINGS: i32 = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Table,
}

fn positive(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(0) => Err("must be positive".into()),
        Ok(n) => Ok(n),
        Err(e) => Err(e.to_string()),
    }
}

#[derive(Debug, Parser)]
#[command(name = "cdcw", version, about = "Cycle double cover workbench")]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
    #[arg(long, global = true, value_enum, default_value = "json", env = "CDCW_FORMAT")]
    pub format: Format,
    /// Cycle enumeration cap per graph.
    #[arg(long, global = true, value_parser = positive, default_value_t = DEFAULT_MAX_CYCLES, env = "CDCW_MAX_CYCLES")]
    pub max_cycles: usize,
    /// Largest cycle/edge incidence count for brute-force cdim.
    #[arg(long, global = true, value_parser = positive, default_value_t = DEFAULT_BRUTE_FORCE_INCIDENCES, env = "CDCW_BF_CAP")]
    pub bf_cap: usize,
    /// Largest cycle count accepted by the exhaustive oracle.
    #[arg(long, global = true, value_parser = positive, default_value_t = DEFAULT_ORACLE_CAP, env = "CDCW_ORACLE_CAP")]
    pub oracle_cap: usize,
    /// Print the elapsed time on standard error.
    #[arg(long, global = true)]
    pub timings: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Components, bridges, cycle count and cyclic core.
    Analyze {
        #[arg(required = true)]
        files: Vec<PathBuf>,
    },
    /// Certified cyclic dimension.
    Cdim {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        /// Confirm with exhaustive minimization when within the incidence cap.
        #[arg(long)]
        force_bruteforce: bool,
    },
    /// Path segments, cycle segments, reduced graph and cyclic structure.
    Segments {
        #[arg(required = true)]
        files: Vec<PathBuf>,
    },
    /// Segment-removal construction of a cover containing a cycle.
    Goddyn {
        file: PathBuf,
        /// Edge ids of the required cycle.
        #[arg(long, value_delimiter = ',', required = true)]
        cycle: Vec<u32>,
        /// Backtrack over every companion choice.
        #[arg(long)]
        exhaustive: bool,
    },
    /// Exhaustive cover search.
    Oracle {
        file: PathBuf,
        #[arg(long, value_delimiter = ',')]
        cycle: Option<Vec<u32>>,
    },
    /// Claim audit over the generated corpus.
    Audit {
        #[arg(long, value_parser = positive, default_value_t = 6, env = "CDCW_MAX_EDGES")]
        max_edges: usize,
        /// Leave out the named graphs.
        #[arg(long)]
        no_named: bool,
        #[arg(long, value_parser = positive, default_value_t = 1, env = "CDCW_JOBS")]
        jobs: usize,
        #[arg(long)]
        exhaustive: bool,
        /// Skip the oracle column of the discrepancy table.
        #[arg(long)]
        no_oracle: bool,
        /// Extra MEL files audited after the corpus.
        files: Vec<PathBuf>,
    },
}

#[derive(Debug, PartialEq, Eq)]
pub struct Output {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

enum Failure {
    Usage(String),
    Internal(String),
}

fn usage(e: impl ToString) -> Failure {
    Failure::Usage(e.to_string())
}

fn table_for(g: &MultiGraph, max_cycles: usize) -> Result<CycleTable, Failure> {
    CycleTable::new(g, max_cycles).map_err(|e| Failure::Internal(e.to_string()))
}

fn load(path: &PathBuf) -> Result<MultiGraph, Failure> {
    mel::read_file(path).map_err(usage)
}

fn select_cycle(g: &MultiGraph, ids: &[u32]) -> Result<CycleBody, Failure> {
    let es: Vec<EdgeId> = ids.iter().map(|&e| EdgeId(e)).collect();
    CycleBody::from_edges(g, &es).map_err(|e| match e {
        CycleError::UnknownEdge(e) => Failure::Usage(format!("unknown edge id {e} in --cycle")),
        other => Failure::Usage(format!("--cycle: {other}")),
    })
}

/// Runs one invocation, returning the buffered output and exit status.
pub fn run<I, T>(args: I) -> Output
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let config = match RunConfig::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => Output {
                    stdout: text,
                    stderr: String::new(),
                    code: EXIT_OK,
                },
                _ => Output {
                    stdout: String::new(),
                    stderr: text,
                    code: EXIT_USAGE,
                },
            };
        }
    };
    let start = Instant::now();
    let result = execute(&config);
    let mut stderr = String::new();
    if config.timings {
        stderr.push_str(&format!("elapsed_ms = {}\n", start.elapsed().as_millis()));
    }
    match result {
        Ok((value, findings)) => Output {
            stdout: match config.format {
                Format::Json => serde_json::to_string_pretty(&value).expect("serializable") + "\n",
                Format::Table => report::table(&value),
            },
            stderr,
            code: if findings { EXIT_FINDINGS } else { EXIT_OK },
        },
        Err(Failure::Usage(m)) => Output {
            stdout: String::new(),
            stderr: stderr + &format!("error: {m}\n"),
            code: EXIT_USAGE,
        },
        Err(Failure::Internal(m)) => Output {
            stdout: String::new(),
            stderr: stderr + &format!("internal error: {m}\n"),
            code: EXIT_INTERNAL,
        },
    }
}

fn name(p: &PathBuf) -> String {
    p.display().to_string()
}

fn execute(config: &RunConfig) -> Result<(Value, bool), Failure> {
    match &config.command {
        Command::Analyze { files } => {
            let mut out = Vec::new();
            for f in files {
                let g = load(f)?;
                let t = table_for(&g, config.max_cycles)?;
                let cc = cyclic_core(&g, &t);
                out.push((name(f), report::analyze(&g, &t, &cc)));
            }
            Ok((report::envelope("analyze", out), false))
        }
        Command::Cdim { files, force_bruteforce } => {
            let mut out = Vec::new();
            for f in files {
                let g = load(f)?;
                let t = table_for(&g, config.max_cycles)?;
                let cert = cdim(&g, &t, config.bf_cap, *force_bruteforce);
                out.push((name(f), report::cdim(&g, &cert)));
            }
            Ok((report::envelope("cdim", out), false))
        }
        Command::Segments { files } => {
            let mut out = Vec::new();
            for f in files {
                let g = load(f)?;
                let t = table_for(&g, config.max_cycles)?;
                out.push((name(f), report::atlas(&SegmentAtlas::new(&g, &t))));
            }
            Ok((report::envelope("segments", out), false))
        }
        Command::Goddyn { file, cycle, exhaustive } => {
            let g = load(file)?;
            let c = select_cycle(&g, cycle)?;
            let t = table_for(&g, config.max_cycles)?;
            let options = BuilderOptions { exhaustive: *exhaustive };
            let cert = goddyn_construct(&g, &t, &c, options).map_err(|e| match e {
                BuilderError::NotACycle => Failure::Usage(e.to_string()),
                _ => Failure::Usage(format!("graph rejected: {e}")),
            })?;
            let cover = assemble_cover(&g, &cert);
            let passed = cert.is_success() && cover.as_ref().is_some_and(|c| c.passes());
            let v = json!({
                "certificate": report::generator_certificate(&cert),
                "cover": cover.as_ref().map_or(Value::Null, report::cover),
            });
            Ok((report::envelope("goddyn", vec![(name(file), v)]), !passed))
        }
        Command::Oracle { file, cycle } => {
            let g = load(file)?;
            let c = cycle.as_deref().map(|ids| select_cycle(&g, ids)).transpose()?;
            let t = table_for(&g, config.max_cycles)?;
            let r = oracle_cdc(&g, &t, c.as_ref(), config.oracle_cap).map_err(|e| match e {
                OracleError::CapExceeded { .. } => Failure::Internal(e.to_string()),
                _ => Failure::Usage(format!("graph rejected: {e}")),
            })?;
            let none = r.is_exhaustive_none();
            Ok((report::envelope("oracle", vec![(name(file), report::oracle(&r))]), none))
        }
        Command::Audit { max_edges, no_named, jobs, exhaustive, no_oracle, files } => {
            let corpus = corpus_generate(*max_edges, !no_named, DEFAULT_EDGE_LIMIT).map_err(usage)?;
            let mut entries = corpus.graphs;
            for f in files {
                entries.push(CorpusEntry {
                    name: name(f),
                    graph: load(f)?,
                    provenance: Provenance::Named,
                });
            }
            let audit_config = AuditConfig {
                max_cycles: config.max_cycles,
                brute_force_cap: config.bf_cap,
                oracle_cap: config.oracle_cap,
                run_oracle: !no_oracle,
                exhaustive_builder: *exhaustive,
                ..AuditConfig::default()
            };
            let report = audit_parallel(&entries, &audit_config, *jobs).map_err(Failure::Internal)?;
            let meta = report::AuditMeta {
                max_edges: *max_edges,
                named: !no_named,
                extra_files: files.iter().map(name).collect(),
            };
            let v = report::audit(&report, &audit_config, &meta);
            let findings = report.has_findings() || report.contradictions > 0;
            Ok((json!({ "command": "audit", "report": v }), findings))
        }
    }
}

/// Audits every entry on `jobs` threads; records keep corpus order.
pub fn audit_parallel(entries: &[CorpusEntry], config: &AuditConfig, jobs: usize) -> Result<AuditReport, String> {
    let pool = rayon::ThreadPoolBuilder::new().num_threads(jobs).build().map_err(|e| e.to_string())?;
    let parts = pool.install(|| entries.par_iter().map(|e| cdc_core::audit::audit_graph(e, config)).collect());
    Ok(AuditReport::from_parts(parts))
}
