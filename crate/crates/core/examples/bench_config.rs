//! Drives the benchmark harness from a JSON config, as the CLI does, and
//! writes the convergence CSV to a temporary directory.

use regret_forge::bench::{execute, parse_run_config, read_csv, write_run};
use regret_forge::games::game_by_name;

fn main() {
    let config = parse_run_config(serde_json::json!({
        "game": "leduc",
        "alg": "dcfr",
        "beta": -0.5,
        "iters": 512,
        "big_blind": 1.0
    }))
    .expect("valid config");
    let game = game_by_name(&config.game).expect("built-in game");
    let output = execute(&game, &config).expect("finite");
    let dir = std::env::temp_dir().join("regret-forge-example");
    let path = dir.join("leduc-dcfr.csv");
    write_run(&path, &output).expect("writable");
    println!("{} -> {}", output.label, path.display());
    for row in read_csv(&path).expect("readable") {
        println!("  T={:<4} nodes={:<9} {:.2} mbb/g", row.iteration, row.nodes_touched, row.exploit_avg);
    }
}
