//! CSV rows and JSONL traces.

use std::io::Write;
use std::path::Path;

use serde::Serialize;
use transmig_core::sim::{ClientRecord, Trace};

use crate::error::{Error, Result};

/// `scenario,solver,total_load,admitted,blocked`
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LoadRow {
    pub scenario: String,
    pub solver: String,
    pub total_load: f64,
    pub admitted: usize,
    pub blocked: usize,
}

/// `scenario,solver,n,lambda,seed,score,load,admitted,runtime_s`
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SolverRow {
    pub scenario: String,
    pub solver: String,
    pub n: usize,
    pub lambda: Option<f64>,
    pub seed: u64,
    pub score: Option<f64>,
    pub load: f64,
    pub admitted: usize,
    pub runtime_s: Option<f64>,
}

/// Table-shaped migration summary; the first five columns are the table's.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MigrationRow {
    #[serde(rename = "type")]
    pub kind: String,
    pub mean: f64,
    pub ci95: f64,
    pub min: f64,
    pub max: f64,
    pub reps: usize,
    pub incomplete: usize,
    pub mean_overlap: f64,
    pub rtt_ms: f64,
    pub base_seed: u64,
}

/// One client arrival with the spacing from the previous one.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClientRow {
    #[serde(rename = "type")]
    pub kind: String,
    pub rtt_ms: f64,
    pub seed: u64,
    pub t_us: u64,
    pub src_mac: String,
    pub seq: u64,
    pub delta_us: u64,
}

impl ClientRow {
    pub fn series(kind: &str, rtt_ms: f64, seed: u64, log: &[ClientRecord]) -> Vec<ClientRow> {
        let mut prev = None;
        log.iter()
            .map(|r| {
                let delta_us = prev.map_or(0, |p| r.t_us - p);
                prev = Some(r.t_us);
                ClientRow {
                    kind: kind.to_string(),
                    rtt_ms,
                    seed,
                    t_us: r.t_us,
                    src_mac: r.src_mac.to_string(),
                    seq: r.seq,
                    delta_us,
                }
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BenefitRow {
    pub scenario: String,
    pub seed: u64,
    pub nodes: usize,
    pub demands: usize,
    pub transcoders: usize,
    pub direct_load: f64,
    pub transcoded_load: f64,
    pub ratio: f64,
    /// Fewest demands fed by any one (source, transcoder, content) trunk.
    pub min_trunk_fanout: usize,
}

/// Per-group means over seeds, for plotting curves.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepRow {
    pub preset: String,
    pub nodes: usize,
    pub client_fraction: f64,
    pub solver: String,
    pub lambda: Option<f64>,
    pub runs: usize,
    pub mean_load: f64,
    pub mean_admitted: f64,
    pub mean_runtime_s: Option<f64>,
    pub seeds: String,
}

pub fn to_csv<T: Serialize>(rows: &[T]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::io("<csv>", e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

/// Writes rows to `path`, or to stdout when `path` is `None`.
pub fn write_csv<T: Serialize>(path: Option<&Path>, rows: &[T]) -> Result<()> {
    let text = to_csv(rows)?;
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| Error::io(p, e)),
        None => std::io::stdout().write_all(text.as_bytes()).map_err(|e| Error::io("<stdout>", e)),
    }
}

#[derive(Serialize)]
struct TraceLine<'a> {
    t_us: u64,
    kind: &'a str,
    at: &'a str,
    detail: String,
}

pub fn trace_jsonl(trace: &Trace) -> String {
    let mut out = String::new();
    for e in &trace.events {
        let line = TraceLine {
            t_us: e.t_us,
            kind: e.kind.name(),
            at: e.site.name(),
            detail: e.kind.to_string(),
        };
        out.push_str(&serde_json::to_string(&line).expect("trace lines serialize"));
        out.push('\n');
    }
    out
}
