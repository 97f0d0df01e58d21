//! Report types and their byte-stable JSON / CSV encodings.
//!
//! JSON objects are written with sorted keys, two-space indentation, LF line
//! endings and floats at 17 significant digits, so equal reports always
//! produce equal bytes and parse back to identical values.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use everett_core::experiments::{
    ComplexityReport, OverlapReport, WalkMode, WorldCountReport, ZenoMode, ZenoReport,
};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::config::{ExperimentKind, OutputFormat, Reprep};
use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SchmidtReport {
    pub dim_i: usize,
    pub dim_ii: usize,
    pub seed: u64,
    pub rank: usize,
    pub lambdas: Vec<f64>,
    pub entanglement_entropy: f64,
    /// Largest difference between the sorted spectra of the two reduced states.
    pub spectra_gap: f64,
    pub reconstruction_error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BranchChild {
    pub id: usize,
    pub weight: f64,
    pub relative_entropy: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BranchReport {
    pub dim: usize,
    pub seed: u64,
    pub rank: usize,
    pub total_entropy: f64,
    pub children: Vec<BranchChild>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainRecord {
    pub step: usize,
    pub total_entropy: f64,
    pub branch_entropy_sum: f64,
    pub leaves: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TracePoint {
    pub step: usize,
    pub rescaled_entropy: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainReport {
    pub dim: usize,
    pub devices: usize,
    pub seed: u64,
    pub reprep: Reprep,
    pub angle: Option<f64>,
    pub records: Vec<ChainRecord>,
    pub leaf_weight_sum: f64,
    pub max_identity_error: f64,
    /// Rescaled entropy history of the branch followed at the last step.
    pub followed_trace: Vec<TracePoint>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Payload {
    Schmidt(SchmidtReport),
    Branch(BranchReport),
    Chain(ChainReport),
    Overlap(OverlapReport),
    Zeno(ZenoReport),
    Worlds(WorldCountReport),
    Evolve(ComplexityReport),
}

/// Configuration as echoed into the report. The output path is deliberately
/// absent so the bytes do not depend on where they are written.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfigEcho {
    pub experiment: ExperimentKind,
    pub parameters: BTreeMap<String, String>,
    pub seed: u64,
    pub format: OutputFormat,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub tool: String,
    pub version: String,
    pub config: ConfigEcho,
    pub result: Payload,
    /// Reported on stderr only; never serialized.
    #[serde(skip)]
    pub wall_time_s: f64,
}

pub fn emit_report(report: &ExperimentReport, format: OutputFormat) -> Result<Vec<u8>, CliError> {
    match format {
        OutputFormat::Json => to_json(report).map(String::into_bytes),
        OutputFormat::Csv => to_csv(&report.result),
    }
}

pub fn parse_report_json(text: &str) -> Result<ExperimentReport, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::Serialize(e.to_string()))
}

pub fn to_json(report: &ExperimentReport) -> Result<String, CliError> {
    let value = serde_json::to_value(report).map_err(|e| CliError::Serialize(e.to_string()))?;
    let mut out = String::new();
    write_value(&mut out, &value, 0);
    out.push('\n');
    Ok(out)
}

fn write_value(out: &mut String, v: &Value, indent: usize) {
    match v {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Number(n) => {
            if let Some(u) = n.as_u64() {
                let _ = write!(out, "{u}");
            } else if let Some(i) = n.as_i64() {
                let _ = write!(out, "{i}");
            } else {
                out.push_str(&format_float(n.as_f64().unwrap_or(f64::NAN)));
            }
        }
        Value::String(s) => out.push_str(&Value::String(s.clone()).to_string()),
        Value::Array(items) => {
            if items.is_empty() {
                out.push_str("[]");
                return;
            }
            out.push_str("[\n");
            for (i, item) in items.iter().enumerate() {
                pad(out, indent + 1);
                write_value(out, item, indent + 1);
                out.push_str(if i + 1 < items.len() { ",\n" } else { "\n" });
            }
            pad(out, indent);
            out.push(']');
        }
        Value::Object(map) => {
            if map.is_empty() {
                out.push_str("{}");
                return;
            }
            let mut keys: Vec<&String> = map.keys().collect();
            keys.sort();
            out.push_str("{\n");
            for (i, k) in keys.iter().enumerate() {
                pad(out, indent + 1);
                out.push_str(&Value::String((*k).clone()).to_string());
                out.push_str(": ");
                write_value(out, &map[*k], indent + 1);
                out.push_str(if i + 1 < keys.len() { ",\n" } else { "\n" });
            }
            pad(out, indent);
            out.push('}');
        }
    }
}

fn pad(out: &mut String, indent: usize) {
    for _ in 0..indent {
        out.push_str("  ");
    }
}

/// `%.17g`-style formatting with trailing zeros removed. Seventeen
/// significant digits always round-trip an f64.
pub fn format_float(x: f64) -> String {
    if !x.is_finite() {
        return "null".into();
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{x:.16e}");
    let (mantissa, exp) = sci.split_once('e').expect("scientific notation");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-4..17).contains(&exp) {
        let decimals = (16 - exp).max(0) as usize;
        trim_zeros(format!("{x:.decimals$}"))
    } else {
        format!("{}e{}{:02}", trim_zeros(mantissa.to_string()), if exp < 0 { '-' } else { '+' }, exp.abs())
    }
}

fn trim_zeros(s: String) -> String {
    if !s.contains('.') {
        return s;
    }
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn optf(v: Option<f64>) -> String {
    v.map(format_float).unwrap_or_default()
}

fn kebab<T: Serialize>(v: &T) -> String {
    match serde_json::to_value(v) {
        Ok(Value::String(s)) => s,
        _ => String::new(),
    }
}

/// Header row plus data rows for each payload.
pub fn csv_rows(result: &Payload) -> (Vec<&'static str>, Vec<Vec<String>>) {
    let f = format_float;
    match result {
        Payload::Schmidt(r) => (
            vec!["index", "lambda"],
            r.lambdas
                .iter()
                .enumerate()
                .map(|(i, l)| vec![i.to_string(), f(*l)])
                .collect(),
        ),
        Payload::Branch(r) => (
            vec!["id", "weight", "relative_entropy"],
            r.children
                .iter()
                .map(|c| vec![c.id.to_string(), f(c.weight), f(c.relative_entropy)])
                .collect(),
        ),
        Payload::Chain(r) => (
            vec!["step", "total_entropy", "branch_entropy_sum", "leaves"],
            r.records
                .iter()
                .map(|c| {
                    vec![
                        c.step.to_string(),
                        f(c.total_entropy),
                        f(c.branch_entropy_sum),
                        c.leaves.to_string(),
                    ]
                })
                .collect(),
        ),
        Payload::Overlap(r) => (
            vec!["hilbert_dim", "trials", "seed", "mean_overlap_sq", "std_error"],
            vec![vec![
                r.hilbert_dim.to_string(),
                r.trials.to_string(),
                r.seed.to_string(),
                f(r.mean_overlap_sq),
                f(r.std_error),
            ]],
        ),
        Payload::Zeno(r) if r.mode == ZenoMode::DeterministicPolarizer => (
            vec!["k", "probability"],
            vec![vec![r.n_intermediate.to_string(), f(r.transmission_probability)]],
        ),
        Payload::Zeno(r) => (
            vec!["k", "dim", "trials", "seed", "probability", "std_error"],
            vec![vec![
                r.n_intermediate.to_string(),
                opt(r.dim),
                opt(r.trials),
                opt(r.seed),
                f(r.transmission_probability),
                optf(r.std_error),
            ]],
        ),
        Payload::Worlds(r) => (
            vec![
                "model",
                "universe_age_s",
                "planck_time_s",
                "log10_ratio",
                "log10_worlds",
                "log10_log10_worlds",
            ],
            vec![vec![
                kebab(&r.model),
                f(r.universe_age_s),
                f(r.planck_time_s),
                f(r.log10_ratio),
                optf(r.log10_worlds),
                optf(r.log10_log10_worlds),
            ]],
        ),
        Payload::Evolve(r) => (
            vec![
                "depth",
                "mode",
                "max_complexity",
                "mean_final_complexity",
                "std_error",
                "branch_count",
                "trials",
                "seed",
            ],
            vec![vec![
                r.depth.to_string(),
                kebab(&r.mode),
                r.max_complexity.to_string(),
                f(r.mean_final_complexity),
                optf(r.std_error),
                opt(r.branch_count),
                opt(if r.mode == WalkMode::SingleHistory { r.trials } else { None }),
                opt(r.seed),
            ]],
        ),
    }
}

pub fn to_csv(result: &Payload) -> Result<Vec<u8>, CliError> {
    let (header, rows) = csv_rows(result);
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    let ser = |e: csv::Error| CliError::Serialize(e.to_string());
    w.write_record(&header).map_err(ser)?;
    for row in rows {
        w.write_record(&row).map_err(ser)?;
    }
    w.into_inner().map_err(|e| CliError::Serialize(e.to_string()))
}
