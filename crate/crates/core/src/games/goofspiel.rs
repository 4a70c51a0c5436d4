use crate::game::{Game, GameTree, NodeId, Player};

const CARDS: usize = 5;

/// Card label for a rank in 1..=5; the ace counts as 1.
pub fn goofspiel_card_label(rank: usize) -> String {
    match rank {
        1 => "A".to_owned(),
        r => r.to_string(),
    }
}

/// Five-card Goofspiel with the prize order fixed to A, 2, 3, 4, 5.
///
/// Each round both players bid a card simultaneously: P2's infoset hides P1's
/// current bid, and both bids become public once the round resolves. The
/// higher bid wins the prize's rank in points, equal bids split it. P1 is paid
/// its point total minus P2's.
///
/// Infoset keys are `g` followed by `|<p1 bid><p2 bid>` for every resolved round.
pub fn build_goofspiel5() -> Game {
    let mut tree = GameTree::new();
    let full = (1u8 << CARDS) - 1;
    let root = build_round(&mut tree, 1, full, full, "g", 0.0);
    tree.set_root(root);
    Game::new("goofspiel5", tree).expect("goofspiel5 is well formed")
}

fn hand_cards(hand: u8) -> impl Iterator<Item = usize> {
    (1..=CARDS).filter(move |r| hand & (1 << (r - 1)) != 0)
}

fn build_round(tree: &mut GameTree, round: usize, hand1: u8, hand2: u8, key: &str, diff: f64) -> NodeId {
    if round > CARDS {
        return tree.terminal(diff);
    }
    let prize = round as f64;
    let mut p1_actions = Vec::new();
    for bid1 in hand_cards(hand1) {
        let mut p2_actions = Vec::new();
        for bid2 in hand_cards(hand2) {
            let gain = match bid1.cmp(&bid2) {
                std::cmp::Ordering::Greater => prize,
                std::cmp::Ordering::Less => -prize,
                std::cmp::Ordering::Equal => 0.0,
            };
            let next_key =
                format!("{key}|{}{}", goofspiel_card_label(bid1), goofspiel_card_label(bid2));
            let child = build_round(
                tree,
                round + 1,
                hand1 & !(1 << (bid1 - 1)),
                hand2 & !(1 << (bid2 - 1)),
                &next_key,
                diff + gain,
            );
            p2_actions.push((goofspiel_card_label(bid2), child));
        }
        let p2 = tree.decision(Player::Two, key, p2_actions);
        p1_actions.push((goofspiel_card_label(bid1), p2));
    }
    tree.decision(Player::One, key, p1_actions)
}
