//! External-sampling MCCFR on Leduc hold'em: vanilla, discounted and
//! initial-discount variants, averaged over several seeds and compared at
//! matching nodes-touched checkpoints.

use regret_forge::games::build_leduc;
use regret_forge::mccfr::{run_mccfr_seeds, MccfrConfig, MccfrVariant};

fn main() {
    let seeds: u64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(16);
    let budget = 2_000_000;
    let game = build_leduc();
    let curves: Vec<(MccfrVariant, Vec<(u64, f64)>)> = MccfrVariant::ALL
        .iter()
        .map(|&variant| {
            let outs = run_mccfr_seeds(&game, &MccfrConfig::new(variant, budget, 0), seeds).expect("finite");
            let points = outs[0]
                .thresholds
                .iter()
                .enumerate()
                .filter(|(k, t)| outs.iter().all(|o| o.thresholds.get(*k) == Some(t)))
                .map(|(k, &t)| (t, outs.iter().map(|o| o.records[k].exploit_avg).sum::<f64>() / seeds as f64))
                .collect();
            (variant, points)
        })
        .collect();
    println!("mean exploitability over {seeds} seeds (chips)");
    print!("{:>9}", "nodes");
    for (v, _) in &curves {
        print!(" {:>23}", v.name());
    }
    println!();
    for (k, (nodes, _)) in curves[0].1.iter().enumerate().filter(|(_, (n, _))| *n >= 1 << 14) {
        print!("{nodes:>9}");
        for (_, points) in &curves {
            print!(" {:>23.4e}", points[k].1);
        }
        println!();
    }
}
