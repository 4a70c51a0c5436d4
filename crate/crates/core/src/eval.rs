//! Exact best responses and the convergence measurements built on them.

use crate::game::{Game, NodeId, NodeKind, Player, StrategyProfile};

/// A pure best response for one player.
#[derive(Debug, Clone, PartialEq)]
pub struct BestResponse {
    pub player: Player,
    /// Chosen action index per infoset of `player`.
    pub actions: Vec<usize>,
    /// Expected payoff of the best response against the fixed opponent.
    pub value: f64,
}

impl BestResponse {
    /// Returns `base` with `player`'s half replaced by this pure strategy.
    pub fn apply_to(&self, game: &Game, base: &StrategyProfile) -> StrategyProfile {
        let mut out = base.clone();
        for (id, &a) in self.actions.iter().enumerate() {
            let v = out.get_mut(self.player, id);
            v.fill(0.0);
            v[a] = 1.0;
        }
        debug_assert_eq!(self.actions.len(), game.infosets().count(self.player));
        out
    }
}

struct Responder<'a> {
    game: &'a Game,
    profile: &'a StrategyProfile,
    player: Player,
    reach: Vec<f64>,
    values: Vec<f64>,
    choice: Vec<Option<usize>>,
}

impl Responder<'_> {
    /// Opponent-and-chance reach of every node, top-down.
    fn fill_reach(&mut self, node: NodeId, reach: f64) {
        self.reach[node] = reach;
        let game = self.game;
        let n = game.node(node);
        match &n.kind {
            NodeKind::Terminal { .. } => {}
            NodeKind::Chance { probs } => {
                for (&p, &c) in probs.iter().zip(&n.children) {
                    self.fill_reach(c, reach * p);
                }
            }
            NodeKind::Decision { player, .. } if *player == self.player => {
                for &c in &n.children {
                    self.fill_reach(c, reach);
                }
            }
            NodeKind::Decision { player, .. } => {
                let id = game.infoset_of(node).expect("decision node has an infoset");
                let sigma = self.profile.get(*player, id);
                for (&p, &c) in sigma.iter().zip(&n.children) {
                    self.fill_reach(c, reach * p);
                }
            }
        }
    }

    fn value(&mut self, node: NodeId) -> f64 {
        if !self.values[node].is_nan() {
            return self.values[node];
        }
        let game = self.game;
        let n = game.node(node);
        let v = match &n.kind {
            NodeKind::Terminal { payoffs } => payoffs[self.player.index()],
            NodeKind::Chance { probs } => self.weighted(probs, &n.children),
            NodeKind::Decision { player, .. } => {
                let id = game.infoset_of(node).expect("decision node has an infoset");
                if *player == self.player {
                    let a = self.choose(id);
                    self.value(n.children[a])
                } else {
                    let sigma = self.profile.get(*player, id);
                    self.weighted(sigma, &n.children)
                }
            }
        };
        self.values[node] = v;
        v
    }

    fn weighted(&mut self, weights: &[f64], children: &[NodeId]) -> f64 {
        let mut total = 0.0;
        for (&w, &c) in weights.iter().zip(children) {
            if w > 0.0 {
                total += w * self.value(c);
            }
        }
        total
    }

    /// Argmax over actions of the reach-weighted child values of every member
    /// state; ties go to the lowest index.
    fn choose(&mut self, infoset: usize) -> usize {
        if let Some(a) = self.choice[infoset] {
            return a;
        }
        let game = self.game;
        let info = game.infosets().player(self.player).info(infoset);
        let mut totals = vec![0.0; info.num_actions()];
        for &h in &info.members {
            let w = self.reach[h];
            if w == 0.0 {
                continue;
            }
            for (a, &c) in game.node(h).children.iter().enumerate() {
                totals[a] += w * self.value(c);
            }
        }
        let mut best = 0;
        for (a, &t) in totals.iter().enumerate().skip(1) {
            if t > totals[best] {
                best = a;
            }
        }
        self.choice[infoset] = Some(best);
        best
    }
}

/// Exact best response of `player` against the opponent's half of `profile`.
pub fn best_response(game: &Game, profile: &StrategyProfile, player: Player) -> BestResponse {
    let n = game.tree().len();
    let mut r = Responder {
        game,
        profile,
        player,
        reach: vec![0.0; n],
        values: vec![f64::NAN; n],
        choice: vec![None; game.infosets().count(player)],
    };
    r.fill_reach(game.root(), 1.0);
    let value = r.value(game.root());
    let actions = r.choice.iter().map(|c| c.unwrap_or(0)).collect();
    BestResponse { player, actions, value }
}

/// Best-response values against each player and their average.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Exploitability {
    /// What P2 earns by best-responding to P1's strategy.
    pub br_vs_p1: f64,
    /// What P1 earns by best-responding to P2's strategy.
    pub br_vs_p2: f64,
    /// `(br_vs_p1 + br_vs_p2) / 2`, half the Nash gap of the profile.
    pub average: f64,
}

pub fn measure(game: &Game, profile: &StrategyProfile) -> Exploitability {
    let br_vs_p2 = best_response(game, profile, Player::One).value;
    let br_vs_p1 = best_response(game, profile, Player::Two).value;
    Exploitability { br_vs_p1, br_vs_p2, average: 0.5 * (br_vs_p1 + br_vs_p2) }
}

/// Average exploitability of the two players' strategies in `profile`.
///
/// In a zero-sum game the sum of the two best-response values is the total
/// gain available from deviating, so the game value is not needed.
pub fn exploitability(game: &Game, profile: &StrategyProfile) -> f64 {
    measure(game, profile).average
}

/// Summary of a run's iterates sufficient to compute whole-game regret.
#[derive(Debug, Clone)]
pub struct IterateHistory {
    pub iterations: u64,
    /// `sum_t u_i(sigma^t)` for each player.
    pub value_sums: [f64; 2],
    /// Uniformly weighted, reach-weighted average of each player's iterates.
    pub average: StrategyProfile,
}

/// Whole-game regret of `player` over the iterates summarized by `history`.
///
/// The best fixed deviation against the sequence of opponent iterates is the
/// best response to their reach-weighted average, scaled by the iteration count.
pub fn overall_regret(game: &Game, history: &IterateHistory, player: Player) -> f64 {
    let br = best_response(game, &history.average, player);
    history.iterations as f64 * br.value - history.value_sums[player.index()]
}

/// Converts chips to milli-big-blinds.
pub fn to_mbb(value_chips: f64, big_blind: f64) -> f64 {
    assert!(big_blind > 0.0, "big blind must be positive, got {big_blind}");
    value_chips / big_blind * 1000.0
}

/// Unit for reported exploitability.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum Unit {
    #[default]
    Chips,
    MilliBigBlinds { big_blind: f64 },
}

impl Unit {
    pub fn convert(self, chips: f64) -> f64 {
        match self {
            Unit::Chips => chips,
            Unit::MilliBigBlinds { big_blind } => to_mbb(chips, big_blind),
        }
    }
}

/// One evaluation checkpoint of a solve run. Values are in chips.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergenceRecord {
    pub iteration: u64,
    pub nodes_touched: u64,
    pub elapsed_ms: f64,
    pub br_vs_p1: f64,
    pub br_vs_p2: f64,
    pub exploit_avg: f64,
}

impl ConvergenceRecord {
    pub fn new(iteration: u64, nodes_touched: u64, elapsed_ms: f64, e: Exploitability) -> Self {
        Self {
            iteration,
            nodes_touched,
            elapsed_ms,
            br_vs_p1: e.br_vs_p1,
            br_vs_p2: e.br_vs_p2,
            exploit_avg: e.average,
        }
    }

    pub fn in_unit(&self, unit: Unit) -> Self {
        Self {
            br_vs_p1: unit.convert(self.br_vs_p1),
            br_vs_p2: unit.convert(self.br_vs_p2),
            exploit_avg: unit.convert(self.exploit_avg),
            ..*self
        }
    }
}
