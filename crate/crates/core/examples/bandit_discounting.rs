//! A one-decision game with arms paying 0, 1 and -1,000,000.
//!
//! The huge early regret on the bad arm makes RM+ spend a very long time
//! unlearning it; discounting the early iterations forgets it quickly.

use regret_forge::cfr::{CfrSolver, Preset, SolveConfig};
use regret_forge::games::{build_bandit, BanditSpec};

fn first_pure_iteration(preset: Preset, budget: u64) -> Option<u64> {
    let game = build_bandit(&BanditSpec::new(vec![0.0, 1.0, -1_000_000.0]).unwrap()).unwrap();
    let mut config = SolveConfig::preset(preset, budget);
    config.track_pure_switch = true;
    let mut solver = CfrSolver::new(&game, config);
    while solver.iteration() < budget && solver.pure_switch().is_none() {
        solver.step().expect("bandit updates are finite");
    }
    solver.pure_switch()
}

fn main() {
    for (preset, budget) in [
        (Preset::CfrPlus, 1_000_000),
        (Preset::Lcfr, 100_000),
        (Preset::Dcfr, 1_000_000),
        (Preset::Cfr, 1_000_000),
    ] {
        match first_pure_iteration(preset, budget) {
            Some(t) => println!("{preset:>6}: always plays the best arm from iteration {t}"),
            None => println!("{preset:>6}: still mixing after {budget} iterations"),
        }
    }
}
