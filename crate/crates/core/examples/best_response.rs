//! Exact best responses on Kuhn poker: against the uniform profile and
//! against a DCFR solution, with the chosen action at every infoset.

use regret_forge::cfr::{run, Preset, SolveConfig};
use regret_forge::eval::{best_response, measure};
use regret_forge::game::{expected_value, Game, Player, StrategyProfile};
use regret_forge::games::build_kuhn;

fn show(game: &Game, label: &str, profile: &StrategyProfile) {
    let e = measure(game, profile);
    println!("{label}: value to P1 {:.5}, exploitability {:.3e}", expected_value(game, profile, Player::One), e.average);
    for p in Player::BOTH {
        let br = best_response(game, profile, p);
        let infos = game.infosets().player(p);
        let picks: Vec<String> =
            br.actions.iter().enumerate().map(|(id, &a)| format!("{}:{}", infos.info(id).key, infos.info(id).actions[a])).collect();
        println!("  {p} best response worth {:+.5}: {}", br.value, picks.join(" "));
    }
}

fn main() {
    let game = build_kuhn();
    show(&game, "uniform", &StrategyProfile::uniform(&game));
    let out = run(&game, SolveConfig::preset(Preset::Dcfr, 2048)).expect("finite");
    show(&game, "dcfr, 2048 iterations", &out.average);
    println!("(game value to P1 is -1/18 = {:.5})", -1.0 / 18.0);
}
