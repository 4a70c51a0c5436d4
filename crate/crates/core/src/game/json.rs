//! JSON game descriptions.
//!
//! ```json
//! {
//!   "root": 0,
//!   "nodes": [
//!     {"type": "chance", "actions": [{"name": "heads", "child": 1}, {"name": "tails", "child": 2}],
//!      "probs": [0.5, 0.5]},
//!     {"type": "decision", "player": 1, "infoset": "h", "actions": [{"name": "a", "child": 3}]},
//!     {"type": "terminal", "payoff_p1": -1.0},
//!     {"type": "terminal", "payoff_p1": 2.5, "payoff_p2": -2.5}
//!   ]
//! }
//! ```
//!
//! Nodes are referenced by their position in `nodes`. `root` defaults to 0.
//! `player` is 1 or 2. A decision node without `infoset` gets a private key
//! `"#<index>"`, i.e. the player fully observes that node. `payoff_p2`
//! defaults to `-payoff_p1`; when given, it must make the terminal zero-sum.

use std::path::Path;

use serde::Deserialize;

use super::{Game, GameError, GameTree, Node, NodeKind, Player};

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Document {
    #[serde(default)]
    root: usize,
    nodes: Vec<JsonNode>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct JsonAction {
    name: String,
    child: usize,
}

#[derive(Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
enum JsonNode {
    Decision {
        player: u8,
        #[serde(default)]
        infoset: Option<String>,
        actions: Vec<JsonAction>,
    },
    Chance {
        actions: Vec<JsonAction>,
        probs: Vec<f64>,
    },
    Terminal {
        payoff_p1: f64,
        #[serde(default)]
        payoff_p2: Option<f64>,
    },
}

/// Parses a JSON description into an unvalidated tree.
pub fn parse_game_json(text: &str) -> Result<GameTree, GameError> {
    let doc: Document = serde_json::from_str(text)?;
    let mut tree = GameTree::new();
    for (index, node) in doc.nodes.into_iter().enumerate() {
        let node = match node {
            JsonNode::Decision { player, infoset, actions } => {
                let player = match player {
                    1 => Player::One,
                    2 => Player::Two,
                    other => {
                        return Err(GameError::Spec(format!(
                            "node {index}: player must be 1 or 2, got {other}"
                        )))
                    }
                };
                let (actions, children) = actions.into_iter().map(|a| (a.name, a.child)).unzip();
                Node {
                    kind: NodeKind::Decision {
                        player,
                        infoset: infoset.unwrap_or_else(|| format!("#{index}")),
                    },
                    actions,
                    children,
                }
            }
            JsonNode::Chance { actions, probs } => {
                let (actions, children) = actions.into_iter().map(|a| (a.name, a.child)).unzip();
                Node { kind: NodeKind::Chance { probs }, actions, children }
            }
            JsonNode::Terminal { payoff_p1, payoff_p2 } => Node {
                kind: NodeKind::Terminal { payoffs: [payoff_p1, payoff_p2.unwrap_or(-payoff_p1)] },
                actions: Vec::new(),
                children: Vec::new(),
            },
        };
        tree.push(node);
    }
    tree.set_root(doc.root);
    Ok(tree)
}

/// Reads, parses and validates a JSON game file.
pub fn load_game_file(path: impl AsRef<Path>) -> Result<Game, GameError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)
        .map_err(|source| GameError::Io { path: path.display().to_string(), source })?;
    let tree = parse_game_json(&text)?;
    let name = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    Game::new(name, tree)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{validate_game, ViolationKind};

    const COIN: &str = r#"{
        "nodes": [
            {"type": "chance", "actions": [{"name": "H", "child": 1}, {"name": "T", "child": 2}], "probs": [0.5, 0.5]},
            {"type": "decision", "player": 1, "infoset": "x", "actions": [{"name": "a", "child": 3}, {"name": "b", "child": 4}]},
            {"type": "decision", "player": 1, "infoset": "x", "actions": [{"name": "a", "child": 5}, {"name": "b", "child": 6}]},
            {"type": "terminal", "payoff_p1": 1},
            {"type": "terminal", "payoff_p1": -1},
            {"type": "terminal", "payoff_p1": -1},
            {"type": "terminal", "payoff_p1": 1, "payoff_p2": -1}
        ]
    }"#;

    #[test]
    fn parses_and_validates() {
        let tree = parse_game_json(COIN).unwrap();
        assert!(validate_game(&tree).is_ok());
        let game = Game::new("coin", tree).unwrap();
        assert_eq!(game.infosets().count(Player::One), 1);
        assert_eq!(game.infosets().player(Player::One).info(0).members, vec![1, 2]);
    }

    #[test]
    fn unknown_node_type_is_an_error() {
        let err = parse_game_json(r#"{"nodes":[{"type":"bogus"}]}"#).unwrap_err();
        assert!(matches!(err, GameError::Json(_)));
    }

    #[test]
    fn non_zero_sum_payoff_survives_parsing_and_fails_validation() {
        let tree = parse_game_json(
            r#"{"nodes":[{"type":"terminal","payoff_p1":1,"payoff_p2":1}]}"#,
        )
        .unwrap();
        let report = validate_game(&tree);
        assert!(matches!(report.violations[0].kind, ViolationKind::NotZeroSum { sum } if sum == 2.0));
    }

    #[test]
    fn bad_player_number() {
        let err = parse_game_json(
            r#"{"nodes":[{"type":"decision","player":3,"actions":[]}]}"#,
        )
        .unwrap_err();
        assert!(err.to_string().contains("player must be 1 or 2"));
    }
}
