//! Finite two-player zero-sum extensive-form games with chance.
//!
//! A game is built in two stages. A [`GameTree`] is a raw arena of nodes that
//! may violate any of the structural rules; [`validate_game`] reports what is
//! wrong with it. [`Game::new`] accepts only trees that validate and attaches
//! the [`InfosetIndex`] the solvers work with.

mod infoset;
mod json;
mod strategy;
mod validate;

use std::fmt;

pub use infoset::{enumerate_infosets, InfosetIndex, InfosetInfo, PlayerInfosets};
pub use json::{load_game_file, parse_game_json};
pub use strategy::{expected_value, expected_values, StrategyProfile};
pub use validate::{validate_game, ValidationReport, Violation, ViolationKind};

/// Index of a node inside a [`GameTree`].
pub type NodeId = usize;

/// One of the two strategic players.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Player {
    One,
    Two,
}

impl Player {
    pub const BOTH: [Player; 2] = [Player::One, Player::Two];

    #[inline]
    pub fn index(self) -> usize {
        match self {
            Player::One => 0,
            Player::Two => 1,
        }
    }

    #[inline]
    pub fn opponent(self) -> Player {
        match self {
            Player::One => Player::Two,
            Player::Two => Player::One,
        }
    }

    /// Sign applied to player-one payoffs to obtain this player's payoff.
    #[inline]
    pub fn sign(self) -> f64 {
        match self {
            Player::One => 1.0,
            Player::Two => -1.0,
        }
    }
}

impl fmt::Display for Player {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Player::One => write!(f, "P1"),
            Player::Two => write!(f, "P2"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum NodeKind {
    /// Payoffs for (P1, P2). Zero-sum games satisfy `payoffs[0] + payoffs[1] == 0`.
    Terminal { payoffs: [f64; 2] },
    /// Nature picks child `k` with probability `probs[k]`.
    Chance { probs: Vec<f64> },
    /// `infoset` is the acting player's observation key; nodes sharing a key
    /// are indistinguishable to that player.
    Decision { player: Player, infoset: String },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Node {
    pub kind: NodeKind,
    pub actions: Vec<String>,
    pub children: Vec<NodeId>,
}

impl Node {
    pub fn is_terminal(&self) -> bool {
        matches!(self.kind, NodeKind::Terminal { .. })
    }
}

/// Raw, unvalidated game tree stored as an arena.
///
/// Builder methods append nodes and return their ids, so trees are usually
/// built bottom-up: children first, then the parent. The most recently added
/// node becomes the root unless [`GameTree::set_root`] is called.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct GameTree {
    nodes: Vec<Node>,
    root: Option<NodeId>,
}

impl GameTree {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, node: Node) -> NodeId {
        self.nodes.push(node);
        self.nodes.len() - 1
    }

    /// Zero-sum terminal paying `payoff_p1` to P1 and its negation to P2.
    pub fn terminal(&mut self, payoff_p1: f64) -> NodeId {
        self.terminal_with([payoff_p1, -payoff_p1])
    }

    pub fn terminal_with(&mut self, payoffs: [f64; 2]) -> NodeId {
        self.push(Node {
            kind: NodeKind::Terminal { payoffs },
            actions: Vec::new(),
            children: Vec::new(),
        })
    }

    pub fn chance<S: Into<String>>(&mut self, outcomes: Vec<(S, f64, NodeId)>) -> NodeId {
        let mut node = Node {
            kind: NodeKind::Chance { probs: Vec::with_capacity(outcomes.len()) },
            actions: Vec::with_capacity(outcomes.len()),
            children: Vec::with_capacity(outcomes.len()),
        };
        for (label, prob, child) in outcomes {
            if let NodeKind::Chance { probs } = &mut node.kind {
                probs.push(prob);
            }
            node.actions.push(label.into());
            node.children.push(child);
        }
        self.push(node)
    }

    pub fn decision<K: Into<String>, S: Into<String>>(
        &mut self,
        player: Player,
        infoset: K,
        actions: Vec<(S, NodeId)>,
    ) -> NodeId {
        let (labels, children) = actions.into_iter().map(|(a, c)| (a.into(), c)).unzip();
        self.push(Node {
            kind: NodeKind::Decision { player, infoset: infoset.into() },
            actions: labels,
            children,
        })
    }

    pub fn set_root(&mut self, root: NodeId) {
        self.root = Some(root);
    }

    /// Explicit root if set, otherwise the last node added.
    pub fn root(&self) -> Option<NodeId> {
        self.root.or_else(|| self.nodes.len().checked_sub(1))
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn node(&self, id: NodeId) -> &Node {
        &self.nodes[id]
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

#[derive(Debug, thiserror::Error)]
pub enum GameError {
    #[error("game failed validation:\n{0}")]
    Invalid(ValidationReport),
    #[error("infoset {key:?} of {player} has inconsistent action counts ({expected} vs {found})")]
    InconsistentInfoset { player: Player, key: String, expected: usize, found: usize },
    #[error("invalid game specification: {0}")]
    Spec(String),
    #[error("failed to read game file {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed game description: {0}")]
    Json(#[from] serde_json::Error),
}

/// A validated game together with its infoset index.
///
/// Immutable after construction; share it freely between solver runs.
#[derive(Debug, Clone)]
pub struct Game {
    name: String,
    tree: GameTree,
    root: NodeId,
    infosets: InfosetIndex,
    node_infoset: Vec<u32>,
    ranges: [f64; 2],
}

const NO_INFOSET: u32 = u32::MAX;

impl Game {
    pub fn new(name: impl Into<String>, tree: GameTree) -> Result<Self, GameError> {
        let report = validate_game(&tree);
        if !report.is_ok() {
            return Err(GameError::Invalid(report));
        }
        let infosets = enumerate_infosets(&tree)?;
        let root = tree.root().expect("validated tree has a root");

        let mut node_infoset = vec![NO_INFOSET; tree.len()];
        for player in Player::BOTH {
            for (id, info) in infosets.player(player).iter().enumerate() {
                for &member in &info.members {
                    node_infoset[member] = id as u32;
                }
            }
        }

        let mut lo = [f64::INFINITY; 2];
        let mut hi = [f64::NEG_INFINITY; 2];
        for node in tree.nodes() {
            if let NodeKind::Terminal { payoffs } = node.kind {
                for p in 0..2 {
                    lo[p] = lo[p].min(payoffs[p]);
                    hi[p] = hi[p].max(payoffs[p]);
                }
            }
        }
        let ranges = [hi[0] - lo[0], hi[1] - lo[1]];

        Ok(Self { name: name.into(), tree, root, infosets, node_infoset, ranges })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn renamed(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn tree(&self) -> &GameTree {
        &self.tree
    }

    #[inline]
    pub fn root(&self) -> NodeId {
        self.root
    }

    #[inline]
    pub fn node(&self, id: NodeId) -> &Node {
        self.tree.node(id)
    }

    pub fn infosets(&self) -> &InfosetIndex {
        &self.infosets
    }

    /// Infoset id of a decision node, `None` for chance and terminal nodes.
    #[inline]
    pub fn infoset_of(&self, node: NodeId) -> Option<usize> {
        match self.node_infoset[node] {
            NO_INFOSET => None,
            id => Some(id as usize),
        }
    }

    /// Payoff range of one player, `max u_i - min u_i` over terminals.
    pub fn payoff_range_of(&self, player: Player) -> f64 {
        self.ranges[player.index()]
    }

    /// Global payoff range: the larger of the two per-player ranges.
    pub fn payoff_range(&self) -> f64 {
        self.ranges[0].max(self.ranges[1])
    }

    pub fn num_terminals(&self) -> usize {
        self.tree.nodes().iter().filter(|n| n.is_terminal()).count()
    }
}
