//! Experiment configuration from command-line flags and `key = value` files.
//!
//! Flag names and file keys are the same (`--dim` ↔ `dim = 4`); flags win
//! over file values. Everything is validated before any experiment runs.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Arg, ArgMatches, Command};
use everett_core::experiments::{
    GrowthModel, WalkMode, WorldCountConfig, DEFAULT_PLANCK_TIME_S, DEFAULT_UNIVERSE_AGE_S,
    MAX_BRANCHING_DEPTH,
};
use serde::{Deserialize, Serialize};

use crate::error::{config_err, CliError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    Schmidt,
    Branch,
    Chain,
    Overlap,
    Zeno,
    ZenoRandom,
    Worlds,
    Evolve,
}

impl ExperimentKind {
    pub const ALL: [ExperimentKind; 8] = [
        ExperimentKind::Schmidt,
        ExperimentKind::Branch,
        ExperimentKind::Chain,
        ExperimentKind::Overlap,
        ExperimentKind::Zeno,
        ExperimentKind::ZenoRandom,
        ExperimentKind::Worlds,
        ExperimentKind::Evolve,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ExperimentKind::Schmidt => "schmidt",
            ExperimentKind::Branch => "branch",
            ExperimentKind::Chain => "chain",
            ExperimentKind::Overlap => "overlap",
            ExperimentKind::Zeno => "zeno",
            ExperimentKind::ZenoRandom => "zeno-random",
            ExperimentKind::Worlds => "worlds",
            ExperimentKind::Evolve => "evolve",
        }
    }

    fn about(self) -> &'static str {
        match self {
            ExperimentKind::Schmidt => "Schmidt decomposition of a seeded random bipartite state",
            ExperimentKind::Branch => "One premeasurement of an object by a ready device, split into branches",
            ExperimentKind::Chain => "Object coupled to a chain of fresh devices, with the entropy ledger",
            ExperimentKind::Overlap => "Mean squared overlap of random state pairs",
            ExperimentKind::Zeno => "Transmission through a polarizer chain",
            ExperimentKind::ZenoRandom => "Transmission through random rank-1 projection chains",
            ExperimentKind::Worlds => "Order-of-magnitude world count",
            ExperimentKind::Evolve => "Complexity random walk with a barrier at zero",
        }
    }

    /// Experiment-specific parameter keys.
    pub fn keys(self) -> &'static [&'static str] {
        match self {
            ExperimentKind::Schmidt => &["dim-i", "dim-ii"],
            ExperimentKind::Branch => &["dim", "weights"],
            ExperimentKind::Chain => &["dim", "devices", "weights", "reprep", "angle"],
            ExperimentKind::Overlap => &["dim", "trials"],
            ExperimentKind::Zeno => &["k"],
            ExperimentKind::ZenoRandom => &["dim", "k", "trials"],
            ExperimentKind::Worlds => &["model", "universe-age-s", "planck-time-s"],
            ExperimentKind::Evolve => &["depth", "mode", "trials"],
        }
    }
}

impl fmt::Display for ExperimentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ExperimentKind {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        Self::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| config_err(format!("unknown experiment '{s}'")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Json,
    Csv,
}

impl FromStr for OutputFormat {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        match s {
            "json" => Ok(OutputFormat::Json),
            "csv" => Ok(OutputFormat::Csv),
            other => Err(config_err(format!("unknown format '{other}' (json or csv)"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Reprep {
    None,
    Rotation,
    Haar,
}

/// Validated, typed experiment parameters.
#[derive(Debug, Clone, PartialEq)]
pub enum Params {
    Schmidt { d_i: usize, d_ii: usize },
    Branch { dim: usize, weights: Option<Vec<f64>> },
    Chain {
        dim: usize,
        devices: usize,
        weights: Option<Vec<f64>>,
        reprep: Reprep,
        angle: f64,
    },
    Overlap { dim: usize, trials: usize },
    Zeno { k: usize },
    ZenoRandom { dim: usize, k: usize, trials: usize },
    Worlds(WorldCountConfig),
    Evolve { depth: usize, mode: WalkMode, trials: usize },
}

const COMMON_KEYS: [&str; 3] = ["seed", "format", "out"];

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub experiment: ExperimentKind,
    /// Experiment parameters as given, after merging file and flags.
    pub parameters: BTreeMap<String, String>,
    pub seed: u64,
    pub output_format: OutputFormat,
    pub output_path: Option<PathBuf>,
    pub params: Params,
}

fn help_for(key: &str) -> &'static str {
    match key {
        "dim" => "Hilbert-space dimension (object dimension for branch/chain)",
        "dim-i" => "Dimension of subsystem I",
        "dim-ii" => "Dimension of subsystem II",
        "weights" => "Comma-separated outcome probabilities for the object state",
        "devices" => "Number of fresh devices in the chain",
        "reprep" => "Object re-preparation between devices: none, rotation or haar",
        "angle" => "Rotation angle in radians for --reprep rotation",
        "trials" => "Number of Monte Carlo trials",
        "k" => "Number of intermediate polarizers or projections",
        "model" => "World growth model: linear or exponential",
        "universe-age-s" => "Age of the universe in seconds",
        "planck-time-s" => "Planck time in seconds",
        "depth" => "Number of mutation steps",
        "mode" => "Walk mode: single-history or full-branching",
        "seed" => "64-bit seed",
        "format" => "Output format: json or csv",
        "out" => "Output file (stdout when absent)",
        _ => "",
    }
}

pub fn command() -> Command {
    let mut cmd = Command::new("everett")
        .version(env!("CARGO_PKG_VERSION"))
        .about("Seeded branching-dynamics experiments with deterministic reports")
        .subcommand_required(true)
        .arg_required_else_help(true);
    for kind in ExperimentKind::ALL {
        let mut sub = Command::new(kind.name()).about(kind.about());
        for &key in kind.keys().iter().chain(COMMON_KEYS.iter()) {
            sub = sub.arg(
                Arg::new(key)
                    .long(key)
                    .value_name("VALUE")
                    .allow_hyphen_values(true)
                    .help(help_for(key)),
            );
        }
        sub = sub.arg(
            Arg::new("config")
                .long("config")
                .value_name("FILE")
                .help("key = value file; flags override its entries"),
        );
        cmd = cmd.subcommand(sub);
    }
    cmd
}

/// Parses `key = value` lines; `#` starts a comment, blank lines are ignored.
pub fn parse_config_text(text: &str) -> Result<BTreeMap<String, String>, CliError> {
    let mut map = BTreeMap::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| config_err(format!("line {}: expected key = value", n + 1)))?;
        let (k, v) = (k.trim(), v.trim());
        if k.is_empty() {
            return Err(config_err(format!("line {}: empty key", n + 1)));
        }
        if map.insert(k.to_string(), v.to_string()).is_some() {
            return Err(config_err(format!("line {}: duplicate key '{k}'", n + 1)));
        }
    }
    Ok(map)
}

pub fn read_config_file(path: &Path) -> Result<BTreeMap<String, String>, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_config_text(&text)
}

/// Parses a full argument vector (program name first).
pub fn parse_args<I, T>(args: I) -> Result<ExperimentConfig, ParseOutcome>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let matches = command().try_get_matches_from(args).map_err(ParseOutcome::Clap)?;
    let (name, sub) = matches.subcommand().expect("subcommand required");
    let kind: ExperimentKind = name.parse().map_err(ParseOutcome::Cli)?;
    from_matches(kind, sub).map_err(ParseOutcome::Cli)
}

/// Either a clap usage error (or help/version request) or a validation error.
#[derive(Debug)]
pub enum ParseOutcome {
    Clap(clap::Error),
    Cli(CliError),
}

fn from_matches(kind: ExperimentKind, sub: &ArgMatches) -> Result<ExperimentConfig, CliError> {
    let mut merged = match sub.get_one::<String>("config") {
        Some(path) => read_config_file(Path::new(path))?,
        None => BTreeMap::new(),
    };
    if let Some(file_kind) = merged.remove("experiment") {
        if file_kind != kind.name() {
            return Err(config_err(format!(
                "config file is for '{file_kind}' but '{kind}' was requested"
            )));
        }
    }
    for &key in kind.keys().iter().chain(COMMON_KEYS.iter()) {
        if let Some(v) = sub.get_one::<String>(key) {
            merged.insert(key.to_string(), v.clone());
        }
    }
    build_config(kind, merged)
}

/// Validates a merged key/value map for `kind`.
pub fn build_config(
    kind: ExperimentKind,
    mut map: BTreeMap<String, String>,
) -> Result<ExperimentConfig, CliError> {
    if let Some(bad) = map
        .keys()
        .find(|k| !kind.keys().contains(&k.as_str()) && !COMMON_KEYS.contains(&k.as_str()))
    {
        return Err(config_err(format!("unknown key '{bad}' for experiment '{kind}'")));
    }
    let seed = match map.remove("seed") {
        Some(s) => s
            .parse::<u64>()
            .map_err(|_| config_err(format!("seed must be an unsigned 64-bit integer, got '{s}'")))?,
        None => 0,
    };
    let output_format = match map.remove("format") {
        Some(f) => f.parse()?,
        None => OutputFormat::Json,
    };
    let output_path = map.remove("out").map(PathBuf::from);
    let params = validate(kind, &map)?;
    Ok(ExperimentConfig {
        experiment: kind,
        parameters: map,
        seed,
        output_format,
        output_path,
        params,
    })
}

fn int(map: &BTreeMap<String, String>, key: &str, min: i128, max: i128) -> Result<Option<usize>, CliError> {
    let Some(raw) = map.get(key) else {
        return Ok(None);
    };
    let v: i128 = raw
        .parse()
        .map_err(|_| config_err(format!("--{key} expects an integer, got '{raw}'")))?;
    if v < min || v > max {
        return Err(config_err(format!("--{key} = {v} out of range [{min}, {max}]")));
    }
    Ok(Some(v as usize))
}

fn required<T>(v: Option<T>, key: &str) -> Result<T, CliError> {
    v.ok_or_else(|| config_err(format!("missing required parameter --{key}")))
}

fn float(map: &BTreeMap<String, String>, key: &str) -> Result<Option<f64>, CliError> {
    let Some(raw) = map.get(key) else {
        return Ok(None);
    };
    let v: f64 = raw
        .parse()
        .map_err(|_| config_err(format!("--{key} expects a number, got '{raw}'")))?;
    if !v.is_finite() {
        return Err(config_err(format!("--{key} must be finite")));
    }
    Ok(Some(v))
}

fn weights(map: &BTreeMap<String, String>) -> Result<Option<Vec<f64>>, CliError> {
    let Some(raw) = map.get("weights") else {
        return Ok(None);
    };
    let ws = raw
        .split(',')
        .map(|w| {
            w.trim()
                .parse::<f64>()
                .ok()
                .filter(|x| x.is_finite() && *x >= 0.0)
                .ok_or_else(|| config_err(format!("--weights entry '{w}' is not a nonnegative number")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    if ws.iter().sum::<f64>() <= 0.0 {
        return Err(config_err("--weights must not all be zero"));
    }
    Ok(Some(ws))
}

/// Object dimension from --dim and/or --weights.
fn object_dim(map: &BTreeMap<String, String>, ws: &Option<Vec<f64>>) -> Result<usize, CliError> {
    let dim = int(map, "dim", 1, i128::MAX)?;
    match (dim, ws) {
        (Some(d), Some(w)) if d != w.len() => Err(config_err(format!(
            "--dim {d} disagrees with {} weights",
            w.len()
        ))),
        (Some(d), _) => Ok(d),
        (None, Some(w)) => Ok(w.len()),
        (None, None) => Err(config_err("missing required parameter --dim (or --weights)")),
    }
}

const BIG: i128 = u32::MAX as i128;

fn validate(kind: ExperimentKind, map: &BTreeMap<String, String>) -> Result<Params, CliError> {
    Ok(match kind {
        ExperimentKind::Schmidt => Params::Schmidt {
            d_i: required(int(map, "dim-i", 1, BIG)?, "dim-i")?,
            d_ii: required(int(map, "dim-ii", 1, BIG)?, "dim-ii")?,
        },
        ExperimentKind::Branch => {
            let ws = weights(map)?;
            Params::Branch {
                dim: object_dim(map, &ws)?,
                weights: ws,
            }
        }
        ExperimentKind::Chain => {
            let ws = weights(map)?;
            let reprep = match map.get("reprep").map(String::as_str) {
                None | Some("none") => Reprep::None,
                Some("rotation") => Reprep::Rotation,
                Some("haar") => Reprep::Haar,
                Some(other) => {
                    return Err(config_err(format!(
                        "--reprep must be none, rotation or haar, got '{other}'"
                    )))
                }
            };
            let angle = float(map, "angle")?;
            if angle.is_some() && reprep != Reprep::Rotation {
                return Err(config_err("--angle only applies to --reprep rotation"));
            }
            let dim = object_dim(map, &ws)?;
            if reprep == Reprep::Rotation && dim < 2 {
                return Err(config_err("--reprep rotation needs --dim ≥ 2"));
            }
            Params::Chain {
                dim,
                devices: required(int(map, "devices", 1, BIG)?, "devices")?,
                weights: ws,
                reprep,
                angle: angle.unwrap_or(std::f64::consts::FRAC_PI_4),
            }
        }
        ExperimentKind::Overlap => Params::Overlap {
            dim: required(int(map, "dim", 1, BIG)?, "dim")?,
            trials: required(int(map, "trials", 1, BIG)?, "trials")?,
        },
        ExperimentKind::Zeno => Params::Zeno {
            k: required(int(map, "k", 0, 100_000_000)?, "k")?,
        },
        ExperimentKind::ZenoRandom => Params::ZenoRandom {
            dim: required(int(map, "dim", 2, BIG)?, "dim")?,
            k: required(int(map, "k", 0, 1_000_000)?, "k")?,
            trials: required(int(map, "trials", 1, BIG)?, "trials")?,
        },
        ExperimentKind::Worlds => {
            let model = match map.get("model").map(String::as_str) {
                None | Some("linear") => GrowthModel::Linear,
                Some("exponential") => GrowthModel::Exponential,
                Some(other) => {
                    return Err(config_err(format!(
                        "--model must be linear or exponential, got '{other}'"
                    )))
                }
            };
            let t = float(map, "universe-age-s")?.unwrap_or(DEFAULT_UNIVERSE_AGE_S);
            let tp = float(map, "planck-time-s")?.unwrap_or(DEFAULT_PLANCK_TIME_S);
            if t <= 0.0 || tp <= 0.0 || t <= tp {
                return Err(config_err(
                    "need universe-age-s > planck-time-s > 0",
                ));
            }
            Params::Worlds(WorldCountConfig {
                universe_age_s: t,
                planck_time_s: tp,
                model,
            })
        }
        ExperimentKind::Evolve => {
            let mode = match map.get("mode").map(String::as_str) {
                Some("single-history") | Some("single") => WalkMode::SingleHistory,
                Some("full-branching") | Some("full") => WalkMode::FullBranching,
                Some(other) => {
                    return Err(config_err(format!(
                        "--mode must be single-history or full-branching, got '{other}'"
                    )))
                }
                None => return Err(config_err("missing required parameter --mode")),
            };
            let depth_cap = match mode {
                WalkMode::FullBranching => MAX_BRANCHING_DEPTH as i128,
                WalkMode::SingleHistory => BIG,
            };
            let depth = required(int(map, "depth", 0, depth_cap)?, "depth")?;
            let trials = match mode {
                WalkMode::SingleHistory => required(int(map, "trials", 1, BIG)?, "trials")?,
                WalkMode::FullBranching => {
                    if map.contains_key("trials") {
                        return Err(config_err("--trials does not apply to full-branching mode"));
                    }
                    0
                }
            };
            Params::Evolve { depth, mode, trials }
        }
    })
}
