//! Describes a small game in JSON, validates it and solves it.
//!
//! P1 sees a fair coin and may bet or check; P2 does not see the coin and
//! calls or folds after a bet.

use regret_forge::cfr::{run, Preset, SolveConfig};
use regret_forge::game::{parse_game_json, validate_game, Game, Player};

const GAME: &str = r#"{
  "nodes": [
    {"type": "chance", "probs": [0.5, 0.5],
     "actions": [{"name": "heads", "child": 1}, {"name": "tails", "child": 2}]},
    {"type": "decision", "player": 1, "infoset": "H",
     "actions": [{"name": "bet", "child": 3}, {"name": "check", "child": 4}]},
    {"type": "decision", "player": 1, "infoset": "T",
     "actions": [{"name": "bet", "child": 5}, {"name": "check", "child": 6}]},
    {"type": "decision", "player": 2, "infoset": "bet",
     "actions": [{"name": "call", "child": 7}, {"name": "fold", "child": 8}]},
    {"type": "terminal", "payoff_p1": 1},
    {"type": "decision", "player": 2, "infoset": "bet",
     "actions": [{"name": "call", "child": 9}, {"name": "fold", "child": 10}]},
    {"type": "terminal", "payoff_p1": -1},
    {"type": "terminal", "payoff_p1": 2},
    {"type": "terminal", "payoff_p1": 1},
    {"type": "terminal", "payoff_p1": -2},
    {"type": "terminal", "payoff_p1": 1}
  ]
}"#;

fn main() {
    let tree = parse_game_json(GAME).expect("well-formed JSON");
    let report = validate_game(&tree);
    println!("validation: {report}");
    let game = Game::new("coin-bluff", tree).expect("valid game");
    let out = run(&game, SolveConfig::preset(Preset::Dcfr, 4096)).expect("finite");
    println!("exploitability after 4096 iterations: {:.3e}", out.records.last().unwrap().exploit_avg);
    for p in Player::BOTH {
        let infos = game.infosets().player(p);
        for id in 0..infos.len() {
            let info = infos.info(id);
            let probs = out.average.get(p, id);
            let parts: Vec<String> = info.actions.iter().zip(probs).map(|(a, x)| format!("{a}={x:.3}")).collect();
            println!("  {p} {:<5} {}", info.key, parts.join(" "));
        }
    }
}
