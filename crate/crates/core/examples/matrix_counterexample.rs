//! The 2x2 game [[1, 0.9], [-0.7, 1]], where CFR+ converges more slowly than
//! 1/T. Prints exploitability at powers of ten and the log-log slope over
//! the last two decades.

use regret_forge::cfr::{run, EvalSchedule, Preset, SolveConfig};
use regret_forge::games::{build_matrix_game, MatrixGameSpec};

fn main() {
    let spec = MatrixGameSpec::new(vec![vec![1.0, 0.9], vec![-0.7, 1.0]]).unwrap();
    let game = build_matrix_game(&spec).unwrap();
    let checkpoints: Vec<u64> = (0..=5).map(|k| 10u64.pow(k)).collect();
    for preset in [Preset::CfrPlus, Preset::Lcfr, Preset::Dcfr] {
        let config = SolveConfig::preset(preset, 100_000).with_eval(EvalSchedule::At(checkpoints.clone()));
        let out = run(&game, config).expect("matrix solve is finite");
        print!("{preset:>5}:");
        for r in &out.records {
            print!("  T={:<6} {:.3e}", r.iteration, r.exploit_avg);
        }
        let at = |t: u64| out.records.iter().find(|r| r.iteration == t).unwrap().exploit_avg;
        let slope = (at(100_000).ln() - at(1_000).ln()) / (100_000f64.ln() - 1_000f64.ln());
        println!("\n       slope over 1e3..1e5: {slope:.3}");
    }
}
