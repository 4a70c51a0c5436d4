//! Solves Kuhn poker with every preset and prints the exploitability curve.

use regret_forge::cfr::{run, Preset, SolveConfig};
use regret_forge::games::build_kuhn;

fn main() {
    let game = build_kuhn();
    println!("{:>16}  {:>10} {:>10} {:>10} {:>10}", "algorithm", "T=64", "T=256", "T=1024", "T=4096");
    for preset in Preset::ALL {
        let out = run(&game, SolveConfig::preset(preset, 4096)).expect("kuhn solve is finite");
        let at = |t: u64| out.records.iter().find(|r| r.iteration == t).map_or(f64::NAN, |r| r.exploit_avg);
        println!(
            "{preset:>16}  {:>10.3e} {:>10.3e} {:>10.3e} {:>10.3e}",
            at(64),
            at(256),
            at(1024),
            at(4096)
        );
    }
    let out = run(&game, SolveConfig::preset(Preset::Dcfr, 4096)).unwrap();
    println!("\nDCFR average strategy for P1 after 4096 iterations:");
    let infosets = game.infosets().player(regret_forge::game::Player::One);
    for (id, info) in infosets.iter().enumerate() {
        let probs = out.average.get(regret_forge::game::Player::One, id);
        let parts: Vec<String> = info.actions.iter().zip(probs).map(|(a, p)| format!("{a}={p:.3}")).collect();
        println!("  {:<4} {}", info.key, parts.join(" "));
    }
}
