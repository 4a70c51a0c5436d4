use std::path::Path;
use std::process::{Command, Output};

use regret_forge::bench::{read_csv, CsvRow, CSV_HEADER};

fn forge(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_regret-forge")).args(args).env_remove("REGRET_FORGE_THREADS").output().unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn assert_increasing(rows: &[CsvRow]) {
    for w in rows.windows(2).filter(|w| w[0].run_id == w[1].run_id) {
        assert!(w[0].iteration < w[1].iteration, "{w:?}");
        assert!(w[0].nodes_touched <= w[1].nodes_touched);
    }
}

/// Every column except elapsed time.
fn stable(rows: &[CsvRow]) -> Vec<(String, String, String, u64, u64, u64, u64, u64)> {
    rows.iter()
        .map(|r| {
            (
                r.run_id.clone(),
                r.game.clone(),
                r.algorithm.clone(),
                r.iteration,
                r.nodes_touched,
                r.br_vs_p1.to_bits(),
                r.br_vs_p2.to_bits(),
                r.exploit_avg.to_bits(),
            )
        })
        .collect()
}

#[test]
fn solve_writes_csv_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("kuhn.csv");
    let out = forge(&["solve", "--game", "kuhn", "--alg", "cfr+", "--iters", "100", "--out", path.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert!(String::from_utf8_lossy(&out.stdout).contains("final exploitability"));
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text.lines().next().unwrap(), CSV_HEADER);
    let rows = read_csv(&path).unwrap();
    let iterations: Vec<u64> = rows.iter().map(|r| r.iteration).collect();
    assert_eq!(iterations, [1, 2, 4, 8, 16, 32, 64, 100]);
    assert!(rows.iter().all(|r| r.game == "kuhn" && r.algorithm == "cfr+"));
    assert!(rows.last().unwrap().exploit_avg < rows[0].exploit_avg);
}

#[test]
fn csv_goes_to_stdout_without_out() {
    let out = forge(&["solve", "--game", "kuhn", "--iters", "4", "--eval-every", "1"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout.clone()).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some(CSV_HEADER));
    assert_eq!(lines.count(), 4);
    assert!(stderr(&out).contains("final exploitability"));
}

#[test]
fn reruns_match_except_elapsed() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str| {
        let path = dir.path().join(name);
        let out = forge(&["solve", "--game", "leduc", "--alg", "mccfr-discount", "--nodes", "200000", "--seed", "5", "--out", path.to_str().unwrap()]);
        assert_eq!(code(&out), 0, "{}", stderr(&out));
        read_csv(&path).unwrap()
    };
    let (a, b) = (run("a.csv"), run("b.csv"));
    assert!(!a.is_empty());
    assert_eq!(stable(&a), stable(&b));
}

#[test]
fn pure_switch_is_reported() {
    let out = forge(&["solve", "--game", "bandit:0,1,-1000000", "--alg", "lcfr", "--iters", "1000", "--eval-every", "final", "--track-pure-switch"]);
    assert_eq!(code(&out), 0);
    assert!(stderr(&out).contains("pure strategy first played at iteration 972"), "{}", stderr(&out));
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("run.json");
    let csv = dir.path().join("out.csv");
    std::fs::write(
        &config,
        format!(r#"{{"game": "kuhn", "alg": "dcfr", "alpha": "inf", "beta": "-inf", "iters": 50, "out": {:?}}}"#, csv.to_str().unwrap()),
    )
    .unwrap();
    let out = forge(&["solve", "--config", config.to_str().unwrap(), "--iters", "16"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let rows = read_csv(&csv).unwrap();
    assert_eq!(rows.last().unwrap().iteration, 16);
    assert_eq!(rows[0].algorithm, "rm-dcfr(inf,-inf,2)");
}

#[test]
fn exit_codes() {
    let bad_type = forge(&["solve", "--game", "kuhn", "--alg", "dcfr", "--alpha", "fast"]);
    assert_eq!(code(&bad_type), 1);
    assert!(stderr(&bad_type).contains("alpha"));

    let bad_game = forge(&["solve", "--game", "nosuch"]);
    assert_eq!(code(&bad_game), 1);
    for name in ["kuhn", "leduc", "goofspiel5"] {
        assert!(stderr(&bad_game).contains(name));
    }

    assert_eq!(code(&forge(&["solve", "--game", "kuhn", "--alg", "cfr++"])), 1);
    assert_eq!(code(&forge(&["solve", "--game", "kuhn", "--alg", "mccfr", "--gamma", "2"])), 1);
    assert_eq!(code(&forge(&["solve", "--game", "kuhn", "--iters", "0"])), 1);
    assert_eq!(code(&forge(&["solve", "--game", "kuhn", "--bogus"])), 1);
    assert_eq!(code(&forge(&["solve", "--config", "/nonexistent/run.json"])), 1);
    assert_eq!(code(&forge(&["--help"])), 0);
    assert_eq!(code(&forge(&["--version"])), 0);

    let missing = forge(&["solve", "--game", "matrix:/nonexistent/m.txt"]);
    assert_eq!(code(&missing), 2);

    let dir = tempfile::tempdir().unwrap();
    let broken = dir.path().join("broken.json");
    std::fs::write(&broken, r#"{"nodes": [{"type": "chance", "probs": [0.7, 0.7], "actions": [{"name": "a", "child": 1}, {"name": "b", "child": 2}]}, {"type": "terminal", "payoff_p1": 1}, {"type": "terminal", "payoff_p1": 0}]}"#).unwrap();
    let invalid = forge(&["solve", "--game", &format!("file:{}", broken.display())]);
    assert_eq!(code(&invalid), 2, "{}", stderr(&invalid));

    let overflow = forge(&["solve", "--game", "bandit:1e308,-1e308", "--alg", "cfr", "--iters", "10"]);
    assert_eq!(code(&overflow), 3);
    assert!(stderr(&overflow).contains("iteration 2"), "{}", stderr(&overflow));
}

#[test]
fn thread_variable_is_validated() {
    let run = |v: &str| {
        Command::new(env!("CARGO_BIN_EXE_regret-forge"))
            .args(["solve", "--game", "kuhn", "--iters", "2"])
            .env("REGRET_FORGE_THREADS", v)
            .output()
            .unwrap()
    };
    assert_eq!(code(&run("0")), 1);
    assert_eq!(code(&run("many")), 1);
    assert_eq!(code(&run("2")), 0);
}

#[test]
fn multi_seed_runs_write_seed_and_mean_files() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("mc.csv");
    let out = forge(&["solve", "--game", "kuhn", "--alg", "mccfr", "--nodes", "50000", "--seeds", "3", "--seed", "10", "--out", path.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let seeds: Vec<Vec<CsvRow>> =
        (10..13).map(|s| read_csv(&dir.path().join(format!("mc-seed{s}.csv"))).unwrap()).collect();
    let all = read_csv(&path).unwrap();
    assert_eq!(all.len(), seeds.iter().map(Vec::len).sum::<usize>());
    let mean = read_csv(&dir.path().join("mc-mean.csv")).unwrap();
    assert!(!mean.is_empty());
    let last = mean.last().unwrap();
    assert_eq!(last.nodes_touched, 50_000);
    let expected = seeds.iter().map(|rows| rows.last().unwrap().exploit_avg).sum::<f64>() / 3.0;
    assert!((last.exploit_avg - expected).abs() < 1e-12);
    for rows in &seeds {
        assert_increasing(rows);
    }
}

fn sweep(dir: &Path, threads: &str) -> Vec<CsvRow> {
    let out = Command::new(env!("CARGO_BIN_EXE_regret-forge"))
        .args(["sweep", "--game", "kuhn", "--algs", "cfr+,lcfr,dcfr,mccfr", "--iters", "64", "--nodes", "20000"])
        .arg("--out")
        .arg(dir)
        .env("REGRET_FORGE_THREADS", threads)
        .output()
        .unwrap();
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    read_csv(&dir.join("merged.csv")).unwrap()
}

#[test]
fn sweep_writes_per_run_and_merged_files() {
    let dir = tempfile::tempdir().unwrap();
    let merged = sweep(dir.path(), "1");
    let mut union = Vec::new();
    for alg in ["cfr+", "lcfr", "dcfr", "mccfr"] {
        let rows = read_csv(&dir.path().join(format!("kuhn-{alg}.csv"))).unwrap();
        assert!(!rows.is_empty());
        assert!(rows.iter().all(|r| r.algorithm == alg));
        assert_increasing(&rows);
        union.extend(rows);
    }
    assert_eq!(stable(&merged), stable(&union));
    let other = tempfile::tempdir().unwrap();
    assert_eq!(stable(&sweep(other.path(), "4")), stable(&merged));
}

#[test]
fn sweep_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("sweep.json");
    let out_dir = dir.path().join("runs");
    std::fs::write(&config, format!(r#"{{"game": "bandit:0,1,-1000000", "algs": ["cfr", "dcfr"], "iters": 8, "out": {:?}}}"#, out_dir.to_str().unwrap())).unwrap();
    let out = forge(&["sweep", "--config", config.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert!(out_dir.join("bandit_0_1_-1000000-cfr.csv").exists());
    assert_eq!(read_csv(&out_dir.join("merged.csv")).unwrap().len(), 8);

    std::fs::write(&config, r#"{"game": "kuhn", "algs": []}"#).unwrap();
    assert_eq!(code(&forge(&["sweep", "--config", config.to_str().unwrap()])), 1);
}
