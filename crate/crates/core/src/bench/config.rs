//! Run and sweep configuration, parsed from JSON with per-key validation.
//!
//! Command-line flags are converted to the same JSON shape and merged over
//! the file, so both sources go through one validator.

use std::path::{Path, PathBuf};

use serde_json::{Map, Value};

use crate::cfr::{EvalSchedule, Preset, UpdateMode};
use crate::eval::Unit;
use crate::games::{is_game_name, unknown_game_message};
use crate::mccfr::{MccfrVariant, DEFAULT_PERIOD_NODES};
use crate::regret::{DiscountSchedule, Minimizer};

pub const DEFAULT_ITERATIONS: u64 = 8192;
pub const DEFAULT_NODE_BUDGET: u64 = 1_000_000;

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("config must be a JSON object")]
    NotAnObject,
    #[error("key `{key}`: expected {expected}, got {got}")]
    Type { key: String, expected: &'static str, got: String },
    #[error("unknown key `{key}`; allowed keys: {allowed}")]
    UnknownKey { key: String, allowed: String },
    #[error("missing required key `{0}`")]
    Missing(&'static str),
    #[error("{0}")]
    UnknownGame(String),
    #[error("{0}")]
    UnknownAlgorithm(String),
    #[error("key `{key}`: {message}")]
    Range { key: String, message: String },
}

/// What a run executes.
#[derive(Debug, Clone, PartialEq)]
pub enum Algorithm {
    Full { label: String, minimizer: Minimizer, optimistic: bool, schedule: DiscountSchedule },
    Sampled(MccfrVariant),
}

impl Algorithm {
    pub fn label(&self) -> &str {
        match self {
            Algorithm::Full { label, .. } => label,
            Algorithm::Sampled(v) => v.name(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub game: String,
    pub algorithm: Algorithm,
    /// Iteration budget for full-traversal algorithms.
    pub iterations: u64,
    /// Nodes-touched budget for sampled algorithms.
    pub node_budget: u64,
    pub period_nodes: u64,
    /// Checkpoints: iterations for full traversal, nodes touched for MCCFR.
    pub eval: EvalSchedule,
    pub seed: u64,
    pub seeds: u64,
    pub out: Option<PathBuf>,
    pub unit: Unit,
    pub update: UpdateMode,
    pub track_pure_switch: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub game: String,
    pub algorithms: Vec<Algorithm>,
    pub iterations: u64,
    pub node_budget: u64,
    pub period_nodes: u64,
    pub eval: EvalSchedule,
    pub seed: u64,
    pub seeds: u64,
    pub out: PathBuf,
    pub unit: Unit,
    pub update: UpdateMode,
}

impl SweepConfig {
    /// The single-run configuration of one sweep entry.
    pub fn run_config(&self, algorithm: &Algorithm) -> RunConfig {
        RunConfig {
            game: self.game.clone(),
            algorithm: algorithm.clone(),
            iterations: self.iterations,
            node_budget: self.node_budget,
            period_nodes: self.period_nodes,
            eval: self.eval.clone(),
            seed: self.seed,
            seeds: self.seeds,
            out: None,
            unit: self.unit,
            update: self.update,
            track_pure_switch: false,
        }
    }
}

const SHARED_KEYS: &[&str] =
    &["game", "iters", "nodes", "period_nodes", "eval_every", "seed", "seeds", "out", "big_blind", "simultaneous"];
const RUN_KEYS: &[&str] = &["alg", "alpha", "beta", "gamma", "minimizer", "optimistic", "track_pure_switch"];
const SWEEP_KEYS: &[&str] = &["algs"];

fn describe(v: &Value) -> String {
    match v {
        Value::Null => "null".into(),
        Value::Bool(b) => format!("boolean {b}"),
        Value::Number(n) => format!("number {n}"),
        Value::String(s) => format!("string {s:?}"),
        Value::Array(_) => "array".into(),
        Value::Object(_) => "object".into(),
    }
}

struct Fields<'a> {
    map: &'a Map<String, Value>,
}

impl<'a> Fields<'a> {
    fn check_keys(&self, allowed: &[&[&str]]) -> Result<(), ConfigError> {
        let all: Vec<&str> = allowed.iter().flat_map(|k| k.iter().copied()).collect();
        for key in self.map.keys() {
            if !all.contains(&key.as_str()) {
                return Err(ConfigError::UnknownKey { key: key.clone(), allowed: all.join(", ") });
            }
        }
        Ok(())
    }

    fn type_error(key: &str, expected: &'static str, v: &Value) -> ConfigError {
        ConfigError::Type { key: key.to_owned(), expected, got: describe(v) }
    }

    fn string(&self, key: &str) -> Result<Option<&'a str>, ConfigError> {
        match self.map.get(key) {
            None => Ok(None),
            Some(Value::String(s)) => Ok(Some(s)),
            Some(v) => Err(Self::type_error(key, "string", v)),
        }
    }

    fn u64(&self, key: &str) -> Result<Option<u64>, ConfigError> {
        match self.map.get(key) {
            None => Ok(None),
            Some(v) => v.as_u64().map(Some).ok_or_else(|| Self::type_error(key, "non-negative integer", v)),
        }
    }

    fn bool(&self, key: &str) -> Result<bool, ConfigError> {
        match self.map.get(key) {
            None => Ok(false),
            Some(Value::Bool(b)) => Ok(*b),
            Some(v) => Err(Self::type_error(key, "boolean", v)),
        }
    }

    /// A number, or one of the strings "inf" / "-inf".
    fn exponent(&self, key: &str) -> Result<Option<f64>, ConfigError> {
        const EXPECTED: &str = "number or \"inf\"/\"-inf\"";
        match self.map.get(key) {
            None => Ok(None),
            Some(Value::Number(n)) => Ok(n.as_f64()),
            Some(Value::String(s)) if s == "inf" || s == "+inf" => Ok(Some(f64::INFINITY)),
            Some(Value::String(s)) if s == "-inf" => Ok(Some(f64::NEG_INFINITY)),
            Some(v) => Err(Self::type_error(key, EXPECTED, v)),
        }
    }
}

struct Shared {
    game: String,
    iterations: u64,
    node_budget: u64,
    period_nodes: u64,
    eval: EvalSchedule,
    seed: u64,
    seeds: u64,
    out: Option<PathBuf>,
    unit: Unit,
    update: UpdateMode,
}

fn positive(key: &str, v: Option<u64>, default: u64) -> Result<u64, ConfigError> {
    match v {
        Some(0) => Err(ConfigError::Range { key: key.into(), message: "must be positive".into() }),
        Some(n) => Ok(n),
        None => Ok(default),
    }
}

fn parse_shared(f: &Fields) -> Result<Shared, ConfigError> {
    let game = f.string("game")?.ok_or(ConfigError::Missing("game"))?;
    if !is_game_name(game) {
        return Err(ConfigError::UnknownGame(unknown_game_message(game)));
    }
    let eval = match f.map.get("eval_every") {
        None => EvalSchedule::PowersOfTwo,
        Some(Value::String(s)) => s
            .parse()
            .map_err(|message| ConfigError::Range { key: "eval_every".into(), message })?,
        Some(Value::Number(n)) => match n.as_u64() {
            Some(k) if k > 0 => EvalSchedule::Every(k),
            _ => return Err(Fields::type_error("eval_every", "\"pow2\" or a positive integer", &Value::Number(n.clone()))),
        },
        Some(v) => return Err(Fields::type_error("eval_every", "\"pow2\" or a positive integer", v)),
    };
    let unit = match f.map.get("big_blind") {
        None => Unit::Chips,
        Some(v) => match v.as_f64() {
            Some(bb) if bb > 0.0 && bb.is_finite() => Unit::MilliBigBlinds { big_blind: bb },
            Some(_) => {
                return Err(ConfigError::Range { key: "big_blind".into(), message: "must be positive".into() })
            }
            None => return Err(Fields::type_error("big_blind", "number", v)),
        },
    };
    Ok(Shared {
        game: game.to_owned(),
        iterations: positive("iters", f.u64("iters")?, DEFAULT_ITERATIONS)?,
        node_budget: positive("nodes", f.u64("nodes")?, DEFAULT_NODE_BUDGET)?,
        period_nodes: positive("period_nodes", f.u64("period_nodes")?, DEFAULT_PERIOD_NODES)?,
        eval,
        seed: f.u64("seed")?.unwrap_or(0),
        seeds: positive("seeds", f.u64("seeds")?, 1)?,
        out: f.string("out")?.map(PathBuf::from),
        unit,
        update: if f.bool("simultaneous")? { UpdateMode::Simultaneous } else { UpdateMode::Alternating },
    })
}

/// Resolves an algorithm name, applying explicit overrides to a preset.
fn resolve_algorithm(name: &str, f: Option<&Fields>) -> Result<Algorithm, ConfigError> {
    if let Ok(v) = name.parse::<MccfrVariant>() {
        if let Some(f) = f {
            for key in ["alpha", "beta", "gamma", "minimizer", "optimistic"] {
                if f.map.contains_key(key) {
                    return Err(ConfigError::Range {
                        key: key.into(),
                        message: format!("not applicable to {name}"),
                    });
                }
            }
        }
        return Ok(Algorithm::Sampled(v));
    }
    let preset: Preset = name.parse().map_err(|e: String| {
        let mccfr: Vec<_> = MccfrVariant::ALL.iter().map(|v| v.name()).collect();
        ConfigError::UnknownAlgorithm(format!("{e}, {}", mccfr.join(", ")))
    })?;
    let (mut minimizer, mut optimistic, mut s) = preset.parts();
    let mut overridden = false;
    if let Some(f) = f {
        for (key, slot) in [("alpha", &mut s.alpha), ("beta", &mut s.beta), ("gamma", &mut s.gamma)] {
            if let Some(x) = f.exponent(key)? {
                *slot = x;
                overridden = true;
            }
        }
        if let Some(m) = f.string("minimizer")? {
            overridden = true;
            if m == "optimistic-rm" {
                minimizer = Minimizer::RegretMatching;
                optimistic = true;
            } else {
                minimizer = m.parse().map_err(|e: String| ConfigError::Range {
                    key: "minimizer".into(),
                    message: format!("{e}; or optimistic-rm"),
                })?;
            }
        }
        if f.bool("optimistic")? {
            overridden |= !optimistic;
            optimistic = true;
        }
    }
    let schedule = DiscountSchedule::new(s.alpha, s.beta, s.gamma)
        .map_err(|e| ConfigError::Range { key: "alpha/beta/gamma".into(), message: e.to_string() })?;
    let label = if overridden {
        let fmt = |x: f64| if x.is_infinite() { if x > 0.0 { "inf".into() } else { "-inf".into() } } else { x.to_string() };
        let opt = if optimistic { "optimistic-" } else { "" };
        format!("{opt}{minimizer}-dcfr({},{},{})", fmt(schedule.alpha), fmt(schedule.beta), fmt(schedule.gamma))
    } else {
        preset.name().to_owned()
    };
    Ok(Algorithm::Full { label, minimizer, optimistic, schedule })
}

fn as_object(value: Value) -> Result<Map<String, Value>, ConfigError> {
    match value {
        Value::Object(map) => Ok(map),
        _ => Err(ConfigError::NotAnObject),
    }
}

/// Validates a run configuration given as a JSON object.
pub fn parse_run_config(value: Value) -> Result<RunConfig, ConfigError> {
    let map = as_object(value)?;
    let f = Fields { map: &map };
    f.check_keys(&[SHARED_KEYS, RUN_KEYS])?;
    let shared = parse_shared(&f)?;
    let algorithm = resolve_algorithm(f.string("alg")?.unwrap_or("dcfr"), Some(&f))?;
    Ok(RunConfig {
        game: shared.game,
        algorithm,
        iterations: shared.iterations,
        node_budget: shared.node_budget,
        period_nodes: shared.period_nodes,
        eval: shared.eval,
        seed: shared.seed,
        seeds: shared.seeds,
        out: shared.out,
        unit: shared.unit,
        update: shared.update,
        track_pure_switch: f.bool("track_pure_switch")?,
    })
}

/// Validates a sweep configuration given as a JSON object.
pub fn parse_sweep_config(value: Value) -> Result<SweepConfig, ConfigError> {
    let map = as_object(value)?;
    let f = Fields { map: &map };
    f.check_keys(&[SHARED_KEYS, SWEEP_KEYS])?;
    let shared = parse_shared(&f)?;
    let names = match map.get("algs") {
        None => return Err(ConfigError::Missing("algs")),
        Some(Value::Array(items)) => items
            .iter()
            .map(|v| v.as_str().ok_or_else(|| Fields::type_error("algs", "array of strings", v)))
            .collect::<Result<Vec<_>, _>>()?,
        Some(v) => return Err(Fields::type_error("algs", "array of strings", v)),
    };
    if names.is_empty() {
        return Err(ConfigError::Range { key: "algs".into(), message: "must list at least one algorithm".into() });
    }
    let algorithms = names.iter().map(|n| resolve_algorithm(n, None)).collect::<Result<Vec<_>, _>>()?;
    Ok(SweepConfig {
        game: shared.game,
        algorithms,
        iterations: shared.iterations,
        node_budget: shared.node_budget,
        period_nodes: shared.period_nodes,
        eval: shared.eval,
        seed: shared.seed,
        seeds: shared.seeds,
        out: shared.out.unwrap_or_else(|| PathBuf::from("sweep-out")),
        unit: shared.unit,
        update: shared.update,
    })
}

pub(crate) fn read_json(path: &Path) -> Result<Value, ConfigError> {
    let text = std::fs::read_to_string(path)
        .map_err(|source| ConfigError::Io { path: path.display().to_string(), source })?;
    Ok(serde_json::from_str(&text)?)
}

/// Reads and validates a run configuration file.
pub fn load_config(path: impl AsRef<Path>) -> Result<RunConfig, ConfigError> {
    parse_run_config(read_json(path.as_ref())?)
}

/// Reads and validates a sweep configuration file.
pub fn load_sweep_config(path: impl AsRef<Path>) -> Result<SweepConfig, ConfigError> {
    parse_sweep_config(read_json(path.as_ref())?)
}

/// Overlays `top` on `base`, key by key.
pub(crate) fn merge(base: Value, top: Map<String, Value>) -> Result<Value, ConfigError> {
    let mut map = as_object(base)?;
    map.extend(top);
    Ok(Value::Object(map))
}
