//! The NormalHedge regret minimizer: the solved scale and strategy for a few
//! regret vectors, then NormalHedge-DCFR against DCFR on Kuhn poker.

use regret_forge::cfr::{run, Preset, SolveConfig};
use regret_forge::games::build_kuhn;
use regret_forge::regret::{nh_strategy, regret_matching};

fn main() {
    for regrets in [vec![1.0, 0.5, -2.0], vec![3.0, 3.0], vec![10.0, 1.0, 1.0, 1.0], vec![-1.0, -4.0]] {
        let mut nh = vec![0.0; regrets.len()];
        let state = nh_strategy(&regrets, &mut nh).expect("finite regrets");
        let rm = regret_matching(&regrets);
        println!("R = {regrets:?}");
        println!("  c = {:.6} after {} bisection steps", state.scale, state.iterations);
        println!("  normal hedge {nh:.4?}");
        println!("  regret match {rm:.4?}");
    }
    let game = build_kuhn();
    println!("\nkuhn exploitability");
    for preset in [Preset::Dcfr, Preset::NhDcfr] {
        let out = run(&game, SolveConfig::preset(preset, 4096)).expect("finite");
        let line: Vec<String> =
            out.records.iter().filter(|r| r.iteration >= 16).map(|r| format!("{}:{:.2e}", r.iteration, r.exploit_avg)).collect();
        println!("  {preset:<8} {}", line.join(" "));
    }
}
