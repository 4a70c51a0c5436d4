//! Benchmark harness: runs configured solves and sweeps and writes
//! convergence CSVs.
//!
//! Every CSV has the header in [`CSV_HEADER`]. Rows within a run are strictly
//! increasing in `iteration`; all columns except `elapsed_ms` are
//! reproducible byte for byte.

pub mod cli;
mod config;

use std::io::Write;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use config::{
    load_config, load_sweep_config, parse_run_config, parse_sweep_config, Algorithm, ConfigError, RunConfig,
    SweepConfig, DEFAULT_ITERATIONS, DEFAULT_NODE_BUDGET,
};

use crate::cfr::{run, Discounting, SolveConfig, SolveError};
use crate::eval::{ConvergenceRecord, Unit};
use crate::game::Game;
use crate::games::game_by_name;
use crate::mccfr::{run_mccfr_seeds, MccfrConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 1;
pub const EXIT_GAME: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;

/// Environment variable capping the number of worker threads.
pub const THREADS_ENV: &str = "REGRET_FORGE_THREADS";

pub const CSV_HEADER: &str =
    "run_id,game,algorithm,iteration,nodes_touched,elapsed_ms,br_vs_p1,br_vs_p2,exploit_avg";

/// One line of a convergence CSV.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CsvRow {
    pub run_id: String,
    pub game: String,
    pub algorithm: String,
    pub iteration: u64,
    pub nodes_touched: u64,
    pub elapsed_ms: f64,
    pub br_vs_p1: f64,
    pub br_vs_p2: f64,
    pub exploit_avg: f64,
}

impl CsvRow {
    fn from_record(run_id: &str, game: &str, algorithm: &str, r: &ConvergenceRecord, unit: Unit) -> Self {
        let r = r.in_unit(unit);
        Self {
            run_id: run_id.to_owned(),
            game: game.to_owned(),
            algorithm: algorithm.to_owned(),
            iteration: r.iteration,
            nodes_touched: r.nodes_touched,
            elapsed_ms: r.elapsed_ms,
            br_vs_p1: r.br_vs_p1,
            br_vs_p2: r.br_vs_p2,
            exploit_avg: r.exploit_avg,
        }
    }
}

pub fn write_csv_to(writer: impl Write, rows: &[CsvRow]) -> Result<(), csv::Error> {
    let mut w = csv::Writer::from_writer(writer);
    if rows.is_empty() {
        w.write_record(CSV_HEADER.split(','))?;
    }
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_csv(path: &Path, rows: &[CsvRow]) -> Result<(), csv::Error> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir)?;
    }
    write_csv_to(std::fs::File::create(path)?, rows)
}

/// Reads a convergence CSV, rejecting files whose header differs from
/// [`CSV_HEADER`].
pub fn read_csv(path: &Path) -> Result<Vec<CsvRow>, csv::Error> {
    let mut r = csv::Reader::from_path(path)?;
    let header: Vec<&str> = r.headers()?.iter().collect();
    let expected: Vec<&str> = CSV_HEADER.split(',').collect();
    if header != expected {
        return Err(csv::Error::from(std::io::Error::new(
            std::io::ErrorKind::InvalidData,
            format!("unexpected CSV header {header:?}, expected {CSV_HEADER}"),
        )));
    }
    r.deserialize().collect()
}

/// The rows of one seed of one algorithm.
#[derive(Debug, Clone)]
pub struct SeedRun {
    pub run_id: String,
    pub seed: Option<u64>,
    pub rows: Vec<CsvRow>,
    pub pure_switch: Option<u64>,
}

/// All output of one configured run.
#[derive(Debug, Clone)]
pub struct RunOutput {
    pub label: String,
    pub runs: Vec<SeedRun>,
    /// Per-checkpoint mean over seeds; only for multi-seed sampled runs.
    pub mean: Option<Vec<CsvRow>>,
}

impl RunOutput {
    pub fn all_rows(&self) -> Vec<CsvRow> {
        self.runs.iter().flat_map(|r| r.rows.iter().cloned()).collect()
    }

    /// Final exploitability: the mean curve's last point if present,
    /// otherwise the single run's.
    pub fn final_exploitability(&self) -> Option<f64> {
        match &self.mean {
            Some(m) => m.last().map(|r| r.exploit_avg),
            None => self.runs.first()?.rows.last().map(|r| r.exploit_avg),
        }
    }
}

/// Builds the solver configuration of a full-traversal algorithm.
pub fn solve_config(config: &RunConfig) -> Option<SolveConfig> {
    let Algorithm::Full { label, minimizer, optimistic, schedule } = &config.algorithm else {
        return None;
    };
    let mut c = SolveConfig::dcfr(*schedule, config.iterations);
    c.label = label.clone();
    c.minimizer = *minimizer;
    c.optimistic = *optimistic;
    c.discounting = Discounting::Multiplicative(*schedule);
    c.eval = config.eval.clone();
    c.update = config.update;
    c.track_pure_switch = config.track_pure_switch;
    Some(c)
}

/// Runs `config` on `game`. Sampled algorithms run `config.seeds` seeds
/// starting at `config.seed`; full traversal is deterministic and runs once.
pub fn execute(game: &Game, config: &RunConfig) -> Result<RunOutput, SolveError> {
    let label = config.algorithm.label().to_owned();
    let base_id = format!("{}/{}", config.game, label);
    match &config.algorithm {
        Algorithm::Full { .. } => {
            let out = run(game, solve_config(config).expect("full algorithm"))?;
            let rows = out
                .records
                .iter()
                .map(|r| CsvRow::from_record(&base_id, &config.game, &label, r, config.unit))
                .collect();
            Ok(RunOutput {
                label,
                runs: vec![SeedRun { run_id: base_id, seed: None, rows, pure_switch: out.pure_switch }],
                mean: None,
            })
        }
        Algorithm::Sampled(variant) => {
            let mc = MccfrConfig {
                variant: *variant,
                node_budget: config.node_budget,
                period_nodes: config.period_nodes,
                seed: config.seed,
                eval: config.eval.clone(),
            };
            let outcomes = run_mccfr_seeds(game, &mc, config.seeds)?;
            let runs: Vec<SeedRun> = outcomes
                .iter()
                .map(|o| {
                    let run_id = format!("{base_id}/seed{}", o.seed);
                    let rows = o
                        .records
                        .iter()
                        .map(|r| CsvRow::from_record(&run_id, &config.game, &label, r, config.unit))
                        .collect();
                    SeedRun { run_id, seed: Some(o.seed), rows, pure_switch: None }
                })
                .collect();
            let mean = (config.seeds > 1).then(|| {
                let per_seed: Vec<(Vec<u64>, &[CsvRow])> = outcomes
                    .iter()
                    .zip(&runs)
                    .map(|(o, r)| (o.thresholds.clone(), r.rows.as_slice()))
                    .collect();
                mean_rows(&format!("{base_id}/mean"), &config.game, &label, &per_seed)
            });
            Ok(RunOutput { label, runs, mean })
        }
    }
}

/// Averages seed curves at the thresholds every seed recorded. The mean row's
/// `nodes_touched` is the threshold and its `iteration` the rounded mean.
pub fn mean_rows(run_id: &str, game: &str, algorithm: &str, seeds: &[(Vec<u64>, &[CsvRow])]) -> Vec<CsvRow> {
    let Some((first, _)) = seeds.first() else {
        return Vec::new();
    };
    let n = seeds.len() as f64;
    first
        .iter()
        .filter_map(|&threshold| {
            let rows: Vec<&CsvRow> = seeds
                .iter()
                .map(|(ts, rows)| ts.iter().position(|&t| t == threshold).map(|k| &rows[k]))
                .collect::<Option<_>>()?;
            let mean = |f: fn(&CsvRow) -> f64| rows.iter().map(|r| f(r)).sum::<f64>() / n;
            Some(CsvRow {
                run_id: run_id.to_owned(),
                game: game.to_owned(),
                algorithm: algorithm.to_owned(),
                iteration: mean(|r| r.iteration as f64).round() as u64,
                nodes_touched: threshold,
                elapsed_ms: mean(|r| r.elapsed_ms),
                br_vs_p1: mean(|r| r.br_vs_p1),
                br_vs_p2: mean(|r| r.br_vs_p2),
                exploit_avg: mean(|r| r.exploit_avg),
            })
        })
        .collect()
}

/// Builds the worker pool, honoring [`THREADS_ENV`].
pub fn thread_pool() -> Result<rayon::ThreadPool, String> {
    let threads = match std::env::var(THREADS_ENV) {
        Err(_) => 0,
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => n,
            _ => return Err(format!("{THREADS_ENV} must be a positive integer, got {v:?}")),
        },
    };
    rayon::ThreadPoolBuilder::new().num_threads(threads).build().map_err(|e| e.to_string())
}

fn sanitize(s: &str) -> String {
    s.chars()
        .map(|c| if c.is_ascii_alphanumeric() || "._+-".contains(c) { c } else { '_' })
        .collect()
}

fn with_suffix(path: &Path, suffix: &str) -> PathBuf {
    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let ext = path.extension().map(|e| format!(".{}", e.to_string_lossy())).unwrap_or_default();
    path.with_file_name(format!("{stem}{suffix}{ext}"))
}

/// Writes a run's files: `path` holds every seed's rows; multi-seed runs also
/// get `<stem>-seed<k>` and `<stem>-mean` files next to it.
pub fn write_run(path: &Path, output: &RunOutput) -> Result<Vec<PathBuf>, csv::Error> {
    let mut written = vec![path.to_path_buf()];
    write_csv(path, &output.all_rows())?;
    if let Some(mean) = &output.mean {
        for run in &output.runs {
            let p = with_suffix(path, &format!("-seed{}", run.seed.unwrap_or(0)));
            write_csv(&p, &run.rows)?;
            written.push(p);
        }
        let p = with_suffix(path, "-mean");
        write_csv(&p, mean)?;
        written.push(p);
    }
    Ok(written)
}

fn exit_for(err: &SolveError) -> i32 {
    match err {
        SolveError::Numeric { .. } | SolveError::NonFinite { .. } => EXIT_NUMERIC,
    }
}

fn load_game(name: &str) -> Result<Game, i32> {
    game_by_name(name).map_err(|e| {
        eprintln!("error: game {name:?}: {e}");
        EXIT_GAME
    })
}

/// Runs one configured solve and writes its CSV (to stdout without `out`).
pub fn solve_command(config: &RunConfig) -> i32 {
    let pool = match thread_pool() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_CONFIG;
        }
    };
    let game = match load_game(&config.game) {
        Ok(g) => g,
        Err(code) => return code,
    };
    let output = match pool.install(|| execute(&game, config)) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return exit_for(&e);
        }
    };
    let unit = match config.unit {
        Unit::Chips => "chips",
        Unit::MilliBigBlinds { .. } => "mbb/g",
    };
    let mut summary = Vec::new();
    if let Some(e) = output.final_exploitability() {
        summary.push(format!("{} on {}: final exploitability {e:.6e} {unit}", output.label, config.game));
    }
    if config.track_pure_switch {
        summary.push(match output.runs.first().and_then(|r| r.pure_switch) {
            Some(t) => format!("pure strategy first played at iteration {t}"),
            None => "strategy never became pure within the budget".to_owned(),
        });
    }
    match &config.out {
        Some(path) => {
            match write_run(path, &output) {
                Ok(files) => {
                    for f in files {
                        summary.push(format!("wrote {}", f.display()));
                    }
                }
                Err(e) => {
                    eprintln!("error: writing {}: {e}", path.display());
                    return EXIT_CONFIG;
                }
            }
            summary.iter().for_each(|l| println!("{l}"));
        }
        None => {
            if let Err(e) = write_csv_to(std::io::stdout().lock(), &output.all_rows()) {
                eprintln!("error: writing CSV: {e}");
                return EXIT_CONFIG;
            }
            summary.iter().for_each(|l| eprintln!("{l}"));
        }
    }
    EXIT_OK
}

/// Runs every algorithm of a sweep, writing one CSV per run and `merged.csv`.
/// Runs execute concurrently; files are written afterwards in config order.
pub fn sweep_command(config: &SweepConfig) -> i32 {
    let pool = match thread_pool() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_CONFIG;
        }
    };
    let game = match load_game(&config.game) {
        Ok(g) => g,
        Err(code) => return code,
    };
    let results: Vec<Result<RunOutput, SolveError>> = pool.install(|| {
        config.algorithms.par_iter().map(|alg| execute(&game, &config.run_config(alg))).collect()
    });
    let mut code = EXIT_OK;
    let mut merged = Vec::new();
    for (alg, result) in config.algorithms.iter().zip(results) {
        match result {
            Ok(output) => {
                let path = config.out.join(format!("{}-{}.csv", sanitize(&config.game), sanitize(alg.label())));
                match write_run(&path, &output) {
                    Ok(_) => {
                        let e = output.final_exploitability().unwrap_or(f64::NAN);
                        println!("{:<24} final exploitability {e:.6e}  -> {}", alg.label(), path.display());
                        merged.extend(output.all_rows());
                    }
                    Err(e) => {
                        eprintln!("error: writing {}: {e}", path.display());
                        code = code.max(EXIT_CONFIG);
                    }
                }
            }
            Err(e) => {
                eprintln!("error: {} failed: {e}", alg.label());
                code = code.max(exit_for(&e));
            }
        }
    }
    let merged_path = config.out.join("merged.csv");
    if let Err(e) = write_csv(&merged_path, &merged) {
        eprintln!("error: writing {}: {e}", merged_path.display());
        code = code.max(EXIT_CONFIG);
    } else {
        println!("merged {} rows -> {}", merged.len(), merged_path.display());
    }
    code
}
