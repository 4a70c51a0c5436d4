use std::collections::HashMap;
use std::fmt;

use super::{GameTree, NodeId, NodeKind};

const PROB_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub enum ViolationKind {
    EmptyTree,
    RootOutOfRange { root: NodeId },
    DanglingChild { child: NodeId },
    /// A node reached along two different paths, or along a cycle.
    NotATree { node: NodeId },
    Unreachable { node: NodeId },
    NoActions,
    LabelCountMismatch { labels: usize, children: usize },
    ProbabilityCountMismatch { probs: usize, children: usize },
    NegativeProbability { prob: f64 },
    ProbabilitySum { sum: f64 },
    NonFinitePayoff,
    NotZeroSum { sum: f64 },
    InfosetActions { key: String, expected: Vec<String>, found: Vec<String> },
    ImperfectRecall { key: String },
}

impl fmt::Display for ViolationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use ViolationKind::*;
        match self {
            EmptyTree => write!(f, "tree has no nodes"),
            RootOutOfRange { root } => write!(f, "root {root} is out of range"),
            DanglingChild { child } => write!(f, "child {child} does not exist"),
            NotATree { node } => write!(f, "node {node} is reachable along more than one path"),
            Unreachable { node } => write!(f, "node {node} is unreachable from the root"),
            NoActions => write!(f, "non-terminal node has no actions"),
            LabelCountMismatch { labels, children } => {
                write!(f, "{labels} action labels for {children} children")
            }
            ProbabilityCountMismatch { probs, children } => {
                write!(f, "{probs} probabilities for {children} children")
            }
            NegativeProbability { prob } => write!(f, "negative chance probability {prob}"),
            ProbabilitySum { sum } => write!(f, "chance probabilities sum to {sum}"),
            NonFinitePayoff => write!(f, "terminal payoff is not finite"),
            NotZeroSum { sum } => write!(f, "payoffs sum to {sum}, not zero"),
            InfosetActions { key, expected, found } => {
                write!(f, "infoset {key:?} has actions {found:?}, expected {expected:?}")
            }
            ImperfectRecall { key } => {
                write!(f, "infoset {key:?} mixes different own-action histories")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    /// Slash-separated action labels from the root; empty for the root itself.
    pub path: String,
    pub kind: ViolationKind,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }

    fn push(&mut self, path: &[&str], kind: ViolationKind) {
        self.violations.push(Violation { path: path.join("/"), kind });
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return write!(f, "no violations");
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "  at /{}: {}", v.path, v.kind)?;
        }
        Ok(())
    }
}

struct InfosetSeen {
    actions: Vec<String>,
    own_history: Vec<(String, usize)>,
}

struct Checker<'a> {
    tree: &'a GameTree,
    report: ValidationReport,
    visited: Vec<bool>,
    seen: [HashMap<String, InfosetSeen>; 2],
}

impl<'a> Checker<'a> {
    fn visit(&mut self, id: NodeId, path: &mut Vec<&'a str>, own: &mut [Vec<(String, usize)>; 2]) {
        if self.visited[id] {
            self.report.push(path, ViolationKind::NotATree { node: id });
            return;
        }
        self.visited[id] = true;
        let tree = self.tree;
        let node = tree.node(id);

        match &node.kind {
            NodeKind::Terminal { payoffs } => {
                if !payoffs.iter().all(|p| p.is_finite()) {
                    self.report.push(path, ViolationKind::NonFinitePayoff);
                } else if payoffs[0] + payoffs[1] != 0.0 {
                    self.report
                        .push(path, ViolationKind::NotZeroSum { sum: payoffs[0] + payoffs[1] });
                }
                return;
            }
            NodeKind::Chance { probs } => {
                if probs.len() != node.children.len() {
                    self.report.push(
                        path,
                        ViolationKind::ProbabilityCountMismatch {
                            probs: probs.len(),
                            children: node.children.len(),
                        },
                    );
                }
                if let Some(&prob) = probs.iter().find(|p| !(**p >= 0.0)) {
                    self.report.push(path, ViolationKind::NegativeProbability { prob });
                }
                let sum: f64 = probs.iter().sum();
                if (sum - 1.0).abs() > PROB_TOLERANCE {
                    self.report.push(path, ViolationKind::ProbabilitySum { sum });
                }
            }
            NodeKind::Decision { player, infoset } => {
                let own_history = &own[player.index()];
                match self.seen[player.index()].get(infoset) {
                    Some(prev) => {
                        if prev.actions != node.actions {
                            self.report.push(
                                path,
                                ViolationKind::InfosetActions {
                                    key: infoset.clone(),
                                    expected: prev.actions.clone(),
                                    found: node.actions.clone(),
                                },
                            );
                        }
                        if &prev.own_history != own_history {
                            self.report
                                .push(path, ViolationKind::ImperfectRecall { key: infoset.clone() });
                        }
                    }
                    None => {
                        self.seen[player.index()].insert(
                            infoset.clone(),
                            InfosetSeen {
                                actions: node.actions.clone(),
                                own_history: own_history.clone(),
                            },
                        );
                    }
                }
            }
        }

        if node.children.is_empty() {
            self.report.push(path, ViolationKind::NoActions);
        }
        if node.actions.len() != node.children.len() {
            self.report.push(
                path,
                ViolationKind::LabelCountMismatch {
                    labels: node.actions.len(),
                    children: node.children.len(),
                },
            );
        }

        let actor = match &node.kind {
            NodeKind::Decision { player, infoset } => Some((*player, infoset.as_str())),
            _ => None,
        };
        for (k, &child) in node.children.iter().enumerate() {
            let label = node.actions.get(k).map(String::as_str).unwrap_or("?");
            path.push(label);
            if child >= tree.len() {
                self.report.push(path, ViolationKind::DanglingChild { child });
            } else {
                if let Some((player, key)) = actor {
                    own[player.index()].push((key.to_owned(), k));
                }
                self.visit(child, path, own);
                if let Some((player, _)) = actor {
                    own[player.index()].pop();
                }
            }
            path.pop();
        }
    }
}

/// Checks every structural rule of a two-player zero-sum game with perfect
/// recall. Never fails; problems are collected in the report.
pub fn validate_game(tree: &GameTree) -> ValidationReport {
    let mut report = ValidationReport::default();
    let Some(root) = tree.root() else {
        report.push(&[], ViolationKind::EmptyTree);
        return report;
    };
    if root >= tree.len() {
        report.push(&[], ViolationKind::RootOutOfRange { root });
        return report;
    }

    let mut checker = Checker {
        tree,
        report,
        visited: vec![false; tree.len()],
        seen: [HashMap::new(), HashMap::new()],
    };
    let mut path = Vec::new();
    let mut own = [Vec::new(), Vec::new()];
    checker.visit(root, &mut path, &mut own);

    let Checker { mut report, visited, .. } = checker;
    for (node, reached) in visited.iter().enumerate() {
        if !reached {
            report.push(&[], ViolationKind::Unreachable { node });
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::Player;
    use crate::games;

    #[test]
    fn well_formed_kuhn_has_empty_report() {
        let game = games::build_kuhn();
        assert!(validate_game(game.tree()).is_ok());
    }

    #[test]
    fn chance_probabilities_must_sum_to_one() {
        let mut t = GameTree::new();
        let a = t.terminal(1.0);
        let b = t.terminal(0.0);
        t.chance(vec![("x", 0.5, a), ("y", 0.6, b)]);
        let report = validate_game(&t);
        assert_eq!(report.violations.len(), 1);
        assert!(matches!(report.violations[0].kind, ViolationKind::ProbabilitySum { sum } if (sum - 1.1).abs() < 1e-12));
    }

    #[test]
    fn terminal_payoffs_must_be_zero_sum() {
        let mut t = GameTree::new();
        let a = t.terminal_with([1.0, -0.5]);
        let b = t.terminal(0.0);
        t.decision(Player::One, "i", vec![("l", a), ("r", b)]);
        let report = validate_game(&t);
        assert_eq!(report.violations.len(), 1);
        assert_eq!(report.violations[0].path, "l");
        assert!(matches!(report.violations[0].kind, ViolationKind::NotZeroSum { .. }));
    }

    #[test]
    fn shared_children_are_flagged() {
        let mut t = GameTree::new();
        let a = t.terminal(1.0);
        t.decision(Player::One, "i", vec![("l", a), ("r", a)]);
        let report = validate_game(&t);
        assert!(report.violations.iter().any(|v| matches!(v.kind, ViolationKind::NotATree { .. })));
    }

    #[test]
    fn cycles_are_flagged() {
        let mut t = GameTree::new();
        let a = t.terminal(1.0);
        let d = t.decision(Player::One, "i", vec![("l", a), ("loop", 1)]);
        t.set_root(d);
        let report = validate_game(&t);
        assert!(report.violations.iter().any(|v| v.path == "loop"
            && matches!(v.kind, ViolationKind::NotATree { node: 1 })));
    }

    #[test]
    fn infoset_action_sets_must_agree() {
        let mut t = GameTree::new();
        let z: Vec<_> = (0..5).map(|_| t.terminal(0.0)).collect();
        let x = t.decision(Player::Two, "j", vec![("a", z[0]), ("b", z[1])]);
        let y = t.decision(Player::Two, "j", vec![("a", z[2]), ("b", z[3]), ("c", z[4])]);
        t.decision(Player::One, "i", vec![("l", x), ("r", y)]);
        let report = validate_game(&t);
        assert!(report
            .violations
            .iter()
            .any(|v| matches!(v.kind, ViolationKind::InfosetActions { .. })));
    }

    #[test]
    fn forgetting_own_actions_is_imperfect_recall() {
        let mut t = GameTree::new();
        let z: Vec<_> = (0..4).map(|_| t.terminal(0.0)).collect();
        let x = t.decision(Player::One, "later", vec![("a", z[0]), ("b", z[1])]);
        let y = t.decision(Player::One, "later", vec![("a", z[2]), ("b", z[3])]);
        t.decision(Player::One, "first", vec![("l", x), ("r", y)]);
        let report = validate_game(&t);
        assert!(report
            .violations
            .iter()
            .any(|v| matches!(&v.kind, ViolationKind::ImperfectRecall { key } if key == "later")));
    }

    #[test]
    fn empty_and_dangling() {
        assert_eq!(validate_game(&GameTree::new()).violations[0].kind, ViolationKind::EmptyTree);
        let mut t = GameTree::new();
        t.decision(Player::One, "i", vec![("l", 7)]);
        let report = validate_game(&t);
        assert!(matches!(report.violations[0].kind, ViolationKind::DanglingChild { child: 7 }));
    }

    #[test]
    fn orphans_are_unreachable() {
        let mut t = GameTree::new();
        t.terminal(3.0);
        let a = t.terminal(1.0);
        t.decision(Player::One, "i", vec![("l", a)]);
        let report = validate_game(&t);
        assert_eq!(report.violations[0].kind, ViolationKind::Unreachable { node: 0 });
    }
}
