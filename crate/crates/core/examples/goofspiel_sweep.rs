//! Runs CFR+, LCFR, DCFR and DCFR(3/2,1/2,2) on five-card Goofspiel in
//! parallel and prints the curves side by side, with the DCFR/CFR+ ratio.

use rayon::prelude::*;
use regret_forge::cfr::{run, Preset, SolveConfig};
use regret_forge::games::build_goofspiel5;

fn main() {
    let iters: u64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(8192);
    let game = build_goofspiel5();
    println!(
        "goofspiel5: {} nodes, {} + {} infosets",
        game.tree().len(),
        game.infosets().count(regret_forge::game::Player::One),
        game.infosets().count(regret_forge::game::Player::Two)
    );
    let presets = [Preset::CfrPlus, Preset::Lcfr, Preset::Dcfr, Preset::DcfrPrune];
    let outs: Vec<_> = presets
        .par_iter()
        .map(|&p| run(&game, SolveConfig::preset(p, iters)).expect("goofspiel solve is finite"))
        .collect();
    print!("{:>6}", "T");
    for p in presets {
        print!(" {:>11}", p.name());
    }
    println!(" {:>11}", "dcfr/cfr+");
    for (k, r) in outs[0].records.iter().enumerate() {
        print!("{:>6}", r.iteration);
        for out in &outs {
            print!(" {:>11.3e}", out.records[k].exploit_avg);
        }
        println!(" {:>11.3}", outs[2].records[k].exploit_avg / r.exploit_avg);
    }
}
