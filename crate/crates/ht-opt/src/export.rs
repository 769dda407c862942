//! Trace files: CSV with a fixed column contract, and JSON with metadata.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use ht_core::analysis::Stability;
use ht_core::trace::{Divergence, TraceMeta};
use ht_core::{ParamVector, RegressorSample, Trace, TraceRecord};
use serde::{Deserialize, Serialize};

use crate::error::{OptError, Result};

pub const CSV_HEADER: [&str; 10] = [
    "k",
    "b_or_phi",
    "theta",
    "vartheta",
    "loss",
    "grad_norm",
    "normalizer",
    "lyapunov",
    "delta_v",
    "diverged",
];

/// 17 significant digits.
fn num(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        format!("{x}")
    }
}

fn opt(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

fn joined(v: &[f64]) -> String {
    let parts: Vec<String> = v.iter().map(|&x| num(x)).collect();
    format!("\"{}\"", parts.join(";"))
}

fn sample_cell(s: &RegressorSample) -> String {
    match s {
        RegressorSample::LogSumExp { b, .. } => num(*b),
        RegressorSample::Linear { phi, .. } => joined(phi),
    }
}

/// Renders the CSV text. Vector cells are quoted and `;`-separated; absent
/// values are empty cells.
pub fn trace_to_csv(trace: &Trace) -> String {
    let mut out = CSV_HEADER.join(",");
    out.push('\n');
    for r in &trace.records {
        let aux = r.aux.as_ref().map(|a| joined(a)).unwrap_or_default();
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{}",
            r.k,
            sample_cell(&r.sample),
            joined(&r.theta),
            aux,
            num(r.loss),
            num(r.grad_norm),
            num(r.normalizer),
            opt(r.lyapunov),
            opt(r.delta_v),
            r.diverged
        );
    }
    out
}

pub fn write_csv(trace: &Trace, path: &Path) -> Result<()> {
    fs::write(path, trace_to_csv(trace)).map_err(|e| OptError::io(path, e))
}

/// One parsed CSV row.
#[derive(Debug, Clone, PartialEq)]
pub struct CsvRow {
    pub k: usize,
    pub b_or_phi: Vec<f64>,
    pub theta: Vec<f64>,
    pub vartheta: Option<Vec<f64>>,
    pub loss: f64,
    pub grad_norm: f64,
    pub normalizer: f64,
    pub lyapunov: Option<f64>,
    pub delta_v: Option<f64>,
    pub diverged: bool,
}

fn parse_f64(cell: &str) -> std::result::Result<f64, String> {
    cell.parse()
        .map_err(|_| format!("`{cell}` is not a number"))
}

fn parse_vec(cell: &str) -> std::result::Result<Vec<f64>, String> {
    cell.split(';').map(parse_f64).collect()
}

fn parse_opt(cell: &str) -> std::result::Result<Option<f64>, String> {
    if cell.is_empty() {
        Ok(None)
    } else {
        parse_f64(cell).map(Some)
    }
}

pub fn read_csv(path: &Path) -> Result<Vec<CsvRow>> {
    let csv_err = |source| OptError::Csv {
        path: path.to_path_buf(),
        source,
    };
    let mut reader = csv::Reader::from_path(path).map_err(csv_err)?;
    let header = reader.headers().map_err(csv_err)?.clone();
    if header.iter().ne(CSV_HEADER) {
        return Err(OptError::Usage(format!(
            "{}: unexpected header {:?}",
            path.display(),
            header.iter().collect::<Vec<_>>()
        )));
    }
    let mut rows = Vec::new();
    for (line, record) in reader.records().enumerate() {
        let record = record.map_err(csv_err)?;
        let bad =
            |msg: String| OptError::Usage(format!("{} row {}: {msg}", path.display(), line + 1));
        let row = (|| -> std::result::Result<CsvRow, String> {
            Ok(CsvRow {
                k: record[0]
                    .parse()
                    .map_err(|_| format!("bad k `{}`", &record[0]))?,
                b_or_phi: parse_vec(&record[1])?,
                theta: parse_vec(&record[2])?,
                vartheta: if record[3].is_empty() {
                    None
                } else {
                    Some(parse_vec(&record[3])?)
                },
                loss: parse_f64(&record[4])?,
                grad_norm: parse_f64(&record[5])?,
                normalizer: parse_f64(&record[6])?,
                lyapunov: parse_opt(&record[7])?,
                delta_v: parse_opt(&record[8])?,
                diverged: record[9]
                    .parse()
                    .map_err(|_| format!("bad flag `{}`", &record[9]))?,
            })
        })()
        .map_err(bad)?;
        rows.push(row);
    }
    Ok(rows)
}

/// JSON form of a trace. Non-finite numbers become `null`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TraceDoc {
    pub name: String,
    pub tuner: String,
    /// Hex FNV-1a hash of the configuration.
    pub config_hash: String,
    pub wall_time_secs: Option<f64>,
    pub theta_star: Option<Vec<f64>>,
    pub stability: Option<String>,
    pub divergence: Option<DivergenceDoc>,
    pub warnings: Vec<String>,
    pub records: Vec<RecordDoc>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DivergenceDoc {
    pub iteration: usize,
    pub time: Option<f64>,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum SampleDoc {
    Linear { phi: Vec<f64>, y: f64 },
    Logsumexp { a: f64, b: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RecordDoc {
    pub k: usize,
    pub time: Option<f64>,
    pub sample: SampleDoc,
    pub theta: Vec<f64>,
    pub aux: Option<Vec<f64>>,
    pub loss: Option<f64>,
    pub loss_gap: Option<f64>,
    pub grad_norm: Option<f64>,
    pub normalizer: Option<f64>,
    pub lyapunov: Option<f64>,
    pub delta_v: Option<f64>,
    pub diverged: bool,
}

fn finite(x: f64) -> Option<f64> {
    x.is_finite().then_some(x)
}

fn stability_from(name: &str) -> Option<Stability> {
    [
        Stability::Converging,
        Stability::Oscillating,
        Stability::Drifting,
        Stability::Blowup,
    ]
    .into_iter()
    .find(|s| s.as_str() == name)
}

impl From<&Trace> for TraceDoc {
    fn from(t: &Trace) -> Self {
        TraceDoc {
            name: t.name.clone(),
            tuner: t.tuner.clone(),
            config_hash: format!("{:016x}", t.meta.config_hash),
            wall_time_secs: t.meta.wall_time_secs,
            theta_star: t.theta_star.as_ref().map(|v| v.to_vec()),
            stability: t.stability.map(|s| s.as_str().to_string()),
            divergence: t.divergence.as_ref().map(|d| DivergenceDoc {
                iteration: d.iteration,
                time: d.time,
                reason: d.reason.clone(),
            }),
            warnings: t.warnings.clone(),
            records: t
                .records
                .iter()
                .map(|r| RecordDoc {
                    k: r.k,
                    time: r.time,
                    sample: match &r.sample {
                        RegressorSample::Linear { phi, y } => SampleDoc::Linear {
                            phi: phi.to_vec(),
                            y: *y,
                        },
                        RegressorSample::LogSumExp { a, b } => {
                            SampleDoc::Logsumexp { a: *a, b: *b }
                        }
                    },
                    theta: r.theta.to_vec(),
                    aux: r.aux.as_ref().map(|a| a.to_vec()),
                    loss: finite(r.loss),
                    loss_gap: r.loss_gap,
                    grad_norm: finite(r.grad_norm),
                    normalizer: finite(r.normalizer),
                    lyapunov: r.lyapunov,
                    delta_v: r.delta_v,
                    diverged: r.diverged,
                })
                .collect(),
        }
    }
}

impl TryFrom<TraceDoc> for Trace {
    type Error = OptError;

    fn try_from(doc: TraceDoc) -> Result<Trace> {
        let vector = |v: Vec<f64>| ParamVector::new(v).map_err(OptError::from);
        let mut trace = Trace::new(doc.name, doc.tuner);
        trace.meta = TraceMeta {
            config_hash: u64::from_str_radix(&doc.config_hash, 16)
                .map_err(|_| OptError::Usage(format!("bad config hash `{}`", doc.config_hash)))?,
            wall_time_secs: doc.wall_time_secs,
        };
        trace.theta_star = doc.theta_star.map(vector).transpose()?;
        trace.stability = doc.stability.as_deref().and_then(stability_from);
        trace.warnings = doc.warnings;
        for r in doc.records {
            trace.push(TraceRecord {
                k: r.k,
                time: r.time,
                sample: match r.sample {
                    SampleDoc::Linear { phi, y } => RegressorSample::linear(vector(phi)?, y)?,
                    SampleDoc::Logsumexp { a, b } => RegressorSample::log_sum_exp(a, b)?,
                },
                theta: vector(r.theta)?,
                aux: r.aux.map(vector).transpose()?,
                loss: r.loss.unwrap_or(f64::NAN),
                loss_gap: r.loss_gap,
                grad_norm: r.grad_norm.unwrap_or(f64::NAN),
                normalizer: r.normalizer.unwrap_or(f64::NAN),
                lyapunov: r.lyapunov,
                delta_v: r.delta_v,
                diverged: r.diverged,
            })?;
        }
        // Set after the records so the final diverged record is accepted.
        trace.divergence = doc.divergence.map(|d| Divergence {
            iteration: d.iteration,
            time: d.time,
            reason: d.reason,
        });
        Ok(trace)
    }
}

pub fn trace_to_json(trace: &Trace) -> String {
    serde_json::to_string_pretty(&TraceDoc::from(trace)).expect("trace documents always serialize")
}

pub fn write_json(trace: &Trace, path: &Path) -> Result<()> {
    fs::write(path, trace_to_json(trace)).map_err(|e| OptError::io(path, e))
}

pub fn read_json(path: &Path) -> Result<Trace> {
    let text = fs::read_to_string(path).map_err(|e| OptError::io(path, e))?;
    let doc: TraceDoc = serde_json::from_str(&text).map_err(|source| OptError::Json {
        path: path.to_path_buf(),
        source,
    })?;
    doc.try_into()
}
