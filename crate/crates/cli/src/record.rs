use std::fmt::Write as _;
use std::path::Path;

use anyhow::Result;
use serde::Serialize;
use sha2::{Digest, Sha256};

use qaoa_maxcut::Graph;

use crate::config::Strategy;

/// Column header of `results.csv`.
pub const RESULTS_HEADER: &str =
    "graph_hash,strategy,n,p,expectation,cut_fraction,approx_ratio,gw_expected,best_cut_prob,seed,wall_ms";

/// Column header of `errors.csv`.
pub const ERRORS_HEADER: &str = "n,family,instance,p,strategy,error";

/// One plotted quantity. Optional columns are empty when not computed.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResultRecord {
    pub graph_hash: String,
    #[serde(serialize_with = "strategy_name")]
    pub strategy: Strategy,
    pub n: usize,
    /// Empty for `gw-only`.
    pub p: Option<usize>,
    pub expectation: f64,
    pub cut_fraction: f64,
    pub approx_ratio: Option<f64>,
    pub gw_expected: Option<f64>,
    pub best_cut_prob: Option<f64>,
    /// Graph seed; every other seed is derived from it and the config.
    pub seed: u64,
    pub wall_ms: Option<f64>,
}

fn strategy_name<S: serde::Serializer>(s: &Strategy, ser: S) -> std::result::Result<S::Ok, S::Error> {
    ser.serialize_str(s.name())
}

/// A cell that could not be computed.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ErrorRecord {
    pub n: usize,
    pub family: String,
    pub instance: usize,
    pub p: Option<usize>,
    pub strategy: String,
    pub error: String,
}

/// First 16 hex digits of the SHA-256 of the graph's text form.
pub fn graph_hash(g: &Graph) -> String {
    Sha256::digest(g.to_text().as_bytes())
        .iter()
        .take(8)
        .fold(String::new(), |mut s, b| {
            write!(s, "{b:02x}").unwrap();
            s
        })
}

/// CSV text with `header` even when `rows` is empty.
pub fn to_csv<T: Serialize>(header: &str, rows: &[T]) -> Result<String> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
    for r in rows {
        w.serialize(r)?;
    }
    let body = String::from_utf8(w.into_inner().map_err(|e| anyhow::anyhow!("{e}"))?)?;
    Ok(format!("{header}\n{body}"))
}

pub fn write_csv<T: Serialize>(path: &Path, header: &str, rows: &[T]) -> Result<()> {
    std::fs::write(path, to_csv(header, rows)?)?;
    Ok(())
}

/// Gnuplot data: one block per strategy, separated by two blank lines, with
/// columns `n p expectation cut_fraction approx_ratio`. Missing values are `NaN`.
pub fn to_gnuplot(records: &[ResultRecord]) -> String {
    let mut strategies: Vec<Strategy> = records.iter().map(|r| r.strategy).collect();
    strategies.sort();
    strategies.dedup();
    let opt = |x: Option<f64>| x.map_or("NaN".to_string(), |v| v.to_string());
    let mut out = String::new();
    for (k, s) in strategies.iter().enumerate() {
        if k > 0 {
            out.push_str("\n\n");
        }
        writeln!(out, "# {}", s.name()).unwrap();
        writeln!(out, "# n p expectation cut_fraction approx_ratio").unwrap();
        for r in records.iter().filter(|r| r.strategy == *s) {
            let p = r.p.map_or("NaN".to_string(), |p| p.to_string());
            writeln!(
                out,
                "{} {} {} {} {}",
                r.n,
                p,
                r.expectation,
                r.cut_fraction,
                opt(r.approx_ratio)
            )
            .unwrap();
        }
    }
    out
}
