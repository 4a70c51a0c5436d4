//! Command-line front end. Flags are overlaid on the optional `--config`
//! JSON file, so both go through the same validation.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Map, Value};

use super::config::{merge, read_json};
use super::{parse_run_config, parse_sweep_config, solve_command, sweep_command, EXIT_CONFIG, EXIT_OK};

#[derive(Debug, Parser)]
#[command(name = "regret-forge", version, about = "Discounted CFR solvers and benchmarks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve one game with one algorithm and write its convergence CSV.
    Solve(SolveArgs),
    /// Run several algorithms on one game and write per-run and merged CSVs.
    Sweep(SweepArgs),
}

#[derive(Debug, Args)]
pub struct SharedArgs {
    /// JSON config file; flags override its keys.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// kuhn, leduc, goofspiel5, matrix:<file>, bandit:<payoffs>, file:<json>.
    #[arg(long)]
    pub game: Option<String>,
    /// Iterations for full-traversal algorithms.
    #[arg(long)]
    pub iters: Option<u64>,
    /// Node budget for sampled algorithms.
    #[arg(long)]
    pub nodes: Option<u64>,
    /// Nodes per discount period for sampled algorithms.
    #[arg(long)]
    pub period_nodes: Option<u64>,
    /// "pow2", "final", or an iteration interval.
    #[arg(long)]
    pub eval_every: Option<String>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Number of seeds for sampled algorithms, starting at --seed.
    #[arg(long)]
    pub seeds: Option<u64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Report exploitability in mbb/g with this big blind.
    #[arg(long)]
    pub big_blind: Option<f64>,
    /// Update both players against the same iterate.
    #[arg(long)]
    pub simultaneous: bool,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[command(flatten)]
    pub shared: SharedArgs,
    /// Preset or sampled variant name.
    #[arg(long)]
    pub alg: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub beta: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub gamma: Option<String>,
    /// rm, rm+, nh, or optimistic-rm.
    #[arg(long)]
    pub minimizer: Option<String>,
    #[arg(long)]
    pub optimistic: bool,
    /// Report the first iteration whose current strategy is pure.
    #[arg(long)]
    pub track_pure_switch: bool,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub shared: SharedArgs,
    /// Comma-separated algorithm names.
    #[arg(long, value_delimiter = ',')]
    pub algs: Option<Vec<String>>,
}

fn number_or_string(s: &str) -> Value {
    match s.parse::<f64>() {
        Ok(x) if x.is_finite() => json!(x),
        _ => Value::String(s.to_owned()),
    }
}

fn eval_value(s: &str) -> Value {
    match s.parse::<u64>() {
        Ok(n) => json!(n),
        Err(_) => Value::String(s.to_owned()),
    }
}

impl SharedArgs {
    fn base(&self) -> Result<Value, super::ConfigError> {
        match &self.config {
            Some(path) => read_json(path),
            None => Ok(Value::Object(Map::new())),
        }
    }

    fn overlay(&self, map: &mut Map<String, Value>) {
        let mut put = |k: &str, v: Option<Value>| {
            if let Some(v) = v {
                map.insert(k.to_owned(), v);
            }
        };
        put("game", self.game.clone().map(Value::String));
        put("iters", self.iters.map(|v| json!(v)));
        put("nodes", self.nodes.map(|v| json!(v)));
        put("period_nodes", self.period_nodes.map(|v| json!(v)));
        put("eval_every", self.eval_every.as_deref().map(eval_value));
        put("seed", self.seed.map(|v| json!(v)));
        put("seeds", self.seeds.map(|v| json!(v)));
        put("out", self.out.as_ref().map(|p| Value::String(p.display().to_string())));
        put("big_blind", self.big_blind.map(|v| json!(v)));
        put("simultaneous", self.simultaneous.then_some(Value::Bool(true)));
    }
}

fn solve_value(args: &SolveArgs) -> Result<Value, super::ConfigError> {
    let mut top = Map::new();
    args.shared.overlay(&mut top);
    let mut put = |k: &str, v: Option<Value>| {
        if let Some(v) = v {
            top.insert(k.to_owned(), v);
        }
    };
    put("alg", args.alg.clone().map(Value::String));
    put("alpha", args.alpha.as_deref().map(number_or_string));
    put("beta", args.beta.as_deref().map(number_or_string));
    put("gamma", args.gamma.as_deref().map(number_or_string));
    put("minimizer", args.minimizer.clone().map(Value::String));
    put("optimistic", args.optimistic.then_some(Value::Bool(true)));
    put("track_pure_switch", args.track_pure_switch.then_some(Value::Bool(true)));
    merge(args.shared.base()?, top)
}

fn sweep_value(args: &SweepArgs) -> Result<Value, super::ConfigError> {
    let mut top = Map::new();
    args.shared.overlay(&mut top);
    if let Some(algs) = &args.algs {
        top.insert("algs".into(), json!(algs));
    }
    merge(args.shared.base()?, top)
}

/// Parses `args` (including the program name) and runs the command.
/// Returns the process exit code.
pub fn run_cli<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match cli.command {
        Command::Solve(args) => match solve_value(&args).and_then(parse_run_config) {
            Ok(config) => solve_command(&config),
            Err(e) => {
                eprintln!("error: {e}");
                EXIT_CONFIG
            }
        },
        Command::Sweep(args) => match sweep_value(&args).and_then(parse_sweep_config) {
            Ok(config) => sweep_command(&config),
            Err(e) => {
                eprintln!("error: {e}");
                EXIT_CONFIG
            }
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn solve(args: &[&str]) -> Value {
        let cli = Cli::try_parse_from(std::iter::once("regret-forge").chain(args.iter().copied())).unwrap();
        let Command::Solve(a) = cli.command else { panic!() };
        solve_value(&a).unwrap()
    }

    #[test]
    fn flags_become_config_keys() {
        let v = solve(&["solve", "--game", "kuhn", "--alg", "dcfr", "--beta", "-inf", "--alpha", "1.5", "--iters", "8"]);
        assert_eq!(v["beta"], json!("-inf"));
        assert_eq!(v["alpha"], json!(1.5));
        assert_eq!(v["iters"], json!(8));
        assert!(v.get("optimistic").is_none());
        let c = parse_run_config(v).unwrap();
        assert_eq!(c.algorithm.label(), "rm-dcfr(1.5,-inf,2)");
    }

    #[test]
    fn flags_override_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.json");
        std::fs::write(&path, r#"{"game": "leduc", "alg": "cfr+", "iters": 3}"#).unwrap();
        let v = solve(&["solve", "--config", path.to_str().unwrap(), "--iters", "5"]);
        assert_eq!(v["game"], json!("leduc"));
        assert_eq!(v["iters"], json!(5));
    }

    #[test]
    fn bad_flags_exit_one() {
        assert_eq!(run_cli(["regret-forge", "solve", "--iters", "many"]), EXIT_CONFIG);
        assert_eq!(run_cli(["regret-forge", "frobnicate"]), EXIT_CONFIG);
        assert_eq!(run_cli(["regret-forge", "solve", "--game", "kuhn", "--alpha", "fast"]), EXIT_CONFIG);
    }
}
