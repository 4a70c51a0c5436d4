//! Kuhn poker and Leduc hold'em.

use crate::game::{Game, GameTree, NodeId, Player};

const RANKS: [&str; 3] = ["J", "Q", "K"];

/// Three-card Kuhn poker with a 1-chip ante and 1-chip bets.
///
/// Infoset keys are the private card followed by the betting history, with
/// `c` for check/call, `b` for bet and `f` for fold: `K`, `Kcb`, `Qb`, ...
pub fn build_kuhn() -> Game {
    let mut tree = GameTree::new();
    let mut deals = Vec::new();
    for c1 in 0..3 {
        for c2 in 0..3 {
            if c1 == c2 {
                continue;
            }
            let node = kuhn_betting(&mut tree, c1, c2, "");
            deals.push((format!("{}{}", RANKS[c1], RANKS[c2]), 1.0 / 6.0, node));
        }
    }
    tree.chance(deals);
    Game::new("kuhn", tree).expect("kuhn is well formed")
}

fn kuhn_betting(tree: &mut GameTree, c1: usize, c2: usize, history: &str) -> NodeId {
    let show = if c1 > c2 { 1.0 } else { -1.0 };
    let (player, card) = if history.len().is_multiple_of(2) { (Player::One, c1) } else { (Player::Two, c2) };
    let key = format!("{}{}", RANKS[card], history);
    let child = |tree: &mut GameTree, action: &str| -> NodeId {
        let h = format!("{history}{action}");
        match h.as_str() {
            "cc" => tree.terminal(show),
            "bc" | "cbc" => tree.terminal(2.0 * show),
            "bf" => tree.terminal(1.0),
            "cbf" => tree.terminal(-1.0),
            _ => kuhn_betting(tree, c1, c2, &h),
        }
    };
    let actions: &[&str] = if history.ends_with('b') { &["f", "c"] } else { &["c", "b"] };
    let edges: Vec<_> = actions.iter().map(|a| (*a, child(tree, a))).collect();
    tree.decision(player, key, edges)
}

/// Leduc hold'em: six cards (two each of J, Q, K), a 1-chip ante, two betting
/// rounds with bet sizes 2 and 4, at most two bets per round, and one public
/// board card dealt between the rounds. A pair with the board wins at
/// showdown, otherwise the higher card wins; equal ranks split.
///
/// Chance outcomes are merged by rank since suits never matter. Infoset keys
/// look like `Q:cb` in the first round and `QK:cc/b` in the second (private
/// card, board card, round histories separated by `/`).
pub fn build_leduc() -> Game {
    let mut tree = GameTree::new();
    let mut p1_deals = Vec::new();
    for c1 in 0..3 {
        let mut p2_deals = Vec::new();
        for c2 in 0..3 {
            let prob = if c1 == c2 { 1.0 / 5.0 } else { 2.0 / 5.0 };
            let state = Leduc { cards: [c1, c2], board: None, history: String::new(), round_start: 0 };
            let node = state.betting(&mut tree, [1.0, 1.0], 0, false);
            p2_deals.push((RANKS[c2], prob, node));
        }
        let node = tree.chance(p2_deals);
        p1_deals.push((RANKS[c1], 1.0 / 3.0, node));
    }
    tree.chance(p1_deals);
    Game::new("leduc", tree).expect("leduc is well formed")
}

#[derive(Clone)]
struct Leduc {
    cards: [usize; 2],
    board: Option<usize>,
    /// Full betting history; rounds separated by `/`.
    history: String,
    round_start: usize,
}

impl Leduc {
    fn round_history(&self) -> &str {
        &self.history[self.round_start..]
    }

    fn actor(&self) -> Player {
        if self.round_history().len().is_multiple_of(2) {
            Player::One
        } else {
            Player::Two
        }
    }

    fn key(&self, player: Player) -> String {
        let private = RANKS[self.cards[player.index()]];
        match self.board {
            None => format!("{private}:{}", self.history),
            Some(b) => format!("{private}{}:{}", RANKS[b], self.history),
        }
    }

    fn bet_size(&self) -> f64 {
        if self.board.is_none() {
            2.0
        } else {
            4.0
        }
    }

    fn showdown(&self, contrib: [f64; 2]) -> f64 {
        let board = self.board.expect("showdown happens after the board card");
        let [c1, c2] = self.cards;
        let strength = |c: usize| if c == board { 10 + c } else { c };
        match strength(c1).cmp(&strength(c2)) {
            std::cmp::Ordering::Greater => contrib[1],
            std::cmp::Ordering::Less => -contrib[0],
            std::cmp::Ordering::Equal => 0.0,
        }
    }

    fn end_round(&self, tree: &mut GameTree, contrib: [f64; 2]) -> NodeId {
        if self.board.is_some() {
            return tree.terminal(self.showdown(contrib));
        }
        let mut outcomes = Vec::new();
        for b in 0..3 {
            let remaining = 2 - self.cards.iter().filter(|&&c| c == b).count();
            if remaining == 0 {
                continue;
            }
            let mut next = self.clone();
            next.board = Some(b);
            next.history.push('/');
            next.round_start = next.history.len();
            let node = next.betting(tree, contrib, 0, false);
            outcomes.push((RANKS[b], remaining as f64 / 4.0, node));
        }
        tree.chance(outcomes)
    }

    fn betting(&self, tree: &mut GameTree, contrib: [f64; 2], bets: u32, facing: bool) -> NodeId {
        let actor = self.actor();
        let me = actor.index();
        let opp = 1 - me;
        let extend = |action: char| {
            let mut next = self.clone();
            next.history.push(action);
            next
        };
        let mut edges = Vec::new();
        if facing {
            // Folding forfeits the actor's contribution.
            let lost = contrib[me];
            edges.push(("f", tree.terminal(if actor == Player::One { -lost } else { lost })));
            let mut called = contrib;
            called[me] = contrib[opp];
            edges.push(("c", extend('c').end_round(tree, called)));
            if bets < 2 {
                let mut raised = contrib;
                raised[me] = contrib[opp] + self.bet_size();
                edges.push(("r", extend('r').betting(tree, raised, bets + 1, true)));
            }
        } else {
            let check = extend('c');
            let node = if self.round_history().is_empty() {
                check.betting(tree, contrib, bets, false)
            } else {
                check.end_round(tree, contrib)
            };
            edges.push(("c", node));
            let mut bet = contrib;
            bet[me] = contrib[opp] + self.bet_size();
            edges.push(("b", extend('b').betting(tree, bet, bets + 1, true)));
        }
        tree.decision(actor, self.key(actor), edges)
    }
}
