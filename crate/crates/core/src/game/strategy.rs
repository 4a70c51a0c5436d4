use super::{Game, NodeId, NodeKind, Player};

/// Behavioral strategy for both players: one probability vector per infoset.
///
/// Storage is flat per player, laid out by [`super::PlayerInfosets::range`].
#[derive(Debug, Clone, PartialEq)]
pub struct StrategyProfile {
    offsets: [Vec<usize>; 2],
    probs: [Vec<f64>; 2],
}

impl StrategyProfile {
    pub fn uniform(game: &Game) -> Self {
        Self::from_fn(game, |_, _, n| vec![1.0 / n as f64; n])
    }

    /// Builds a profile by asking `f(player, infoset id, num_actions)` for each vector.
    pub fn from_fn(game: &Game, mut f: impl FnMut(Player, usize, usize) -> Vec<f64>) -> Self {
        let index = game.infosets();
        let mut probs: [Vec<f64>; 2] = Default::default();
        for player in Player::BOTH {
            let table = index.player(player);
            let flat = &mut probs[player.index()];
            flat.reserve(table.total_actions());
            for (id, info) in table.iter().enumerate() {
                let v = f(player, id, info.num_actions());
                assert_eq!(v.len(), info.num_actions(), "strategy vector length for {}", info.key);
                flat.extend(v);
            }
        }
        Self {
            offsets: [
                index.player(Player::One).offsets().to_vec(),
                index.player(Player::Two).offsets().to_vec(),
            ],
            probs,
        }
    }

    /// Wraps flat per-player tables laid out like the game's infoset index.
    pub fn from_flat(game: &Game, p1: Vec<f64>, p2: Vec<f64>) -> Self {
        let index = game.infosets();
        assert_eq!(p1.len(), index.player(Player::One).total_actions());
        assert_eq!(p2.len(), index.player(Player::Two).total_actions());
        Self {
            offsets: [
                index.player(Player::One).offsets().to_vec(),
                index.player(Player::Two).offsets().to_vec(),
            ],
            probs: [p1, p2],
        }
    }

    #[inline]
    pub fn get(&self, player: Player, infoset: usize) -> &[f64] {
        let o = &self.offsets[player.index()];
        &self.probs[player.index()][o[infoset]..o[infoset + 1]]
    }

    pub fn get_mut(&mut self, player: Player, infoset: usize) -> &mut [f64] {
        let o = &self.offsets[player.index()];
        &mut self.probs[player.index()][o[infoset]..o[infoset + 1]]
    }

    pub fn flat(&self, player: Player) -> &[f64] {
        &self.probs[player.index()]
    }

    pub fn num_infosets(&self, player: Player) -> usize {
        self.offsets[player.index()].len() - 1
    }

    /// Replaces one player's half of the profile with another profile's.
    pub fn with_player_from(&self, player: Player, other: &StrategyProfile) -> Self {
        let mut out = self.clone();
        out.probs[player.index()] = other.probs[player.index()].clone();
        out
    }

    /// First infoset (player, id) whose vector is not a distribution within `tol`.
    pub fn find_invalid(&self, tol: f64) -> Option<(Player, usize)> {
        for player in Player::BOTH {
            for id in 0..self.num_infosets(player) {
                let v = self.get(player, id);
                let sum: f64 = v.iter().sum();
                if v.iter().any(|p| !(*p >= 0.0)) || (sum - 1.0).abs() > tol {
                    return Some((player, id));
                }
            }
        }
        None
    }

    pub fn is_valid(&self) -> bool {
        self.find_invalid(1e-9).is_none()
    }
}

fn value_at(game: &Game, profile: &StrategyProfile, node: NodeId, seat: usize) -> f64 {
    let n = game.node(node);
    let weights = match &n.kind {
        NodeKind::Terminal { payoffs } => return payoffs[seat],
        NodeKind::Chance { probs } => probs.as_slice(),
        NodeKind::Decision { player, .. } => {
            let id = game.infoset_of(node).expect("decision node has an infoset");
            profile.get(*player, id)
        }
    };
    weights
        .iter()
        .zip(&n.children)
        .filter(|(p, _)| **p > 0.0)
        .map(|(p, &c)| p * value_at(game, profile, c, seat))
        .sum()
}

/// Exact expected payoff of `player` when both play `profile`.
pub fn expected_value(game: &Game, profile: &StrategyProfile, player: Player) -> f64 {
    value_at(game, profile, game.root(), player.index())
}

pub fn expected_values(game: &Game, profile: &StrategyProfile) -> [f64; 2] {
    [expected_value(game, profile, Player::One), expected_value(game, profile, Player::Two)]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::games::{self, MatrixGameSpec};
    use proptest::prelude::*;

    fn matrix() -> Game {
        games::build_matrix_game(&MatrixGameSpec::new(vec![vec![1.0, 0.9], vec![-0.7, 1.0]]).unwrap())
            .unwrap()
    }

    #[test]
    fn uniform_matrix_value_is_mean_of_entries() {
        let g = matrix();
        let v = expected_value(&g, &StrategyProfile::uniform(&g), Player::One);
        assert!((v - 0.55).abs() < 1e-12);
    }

    #[test]
    fn goofspiel_mirror_strategy_is_worth_zero() {
        let g = games::build_goofspiel5();
        // Bid the card whose rank matches the prize: that card is always in hand.
        let profile = StrategyProfile::from_fn(&g, |player, id, n| {
            let info = g.infosets().player(player).info(id);
            let round = info.key.matches('|').count() + 1;
            let target = games::goofspiel_card_label(round);
            let mut v = vec![0.0; n];
            // Off the mirror path the target card may already be spent.
            let k = info.actions.iter().position(|a| a == &target).unwrap_or(0);
            v[k] = 1.0;
            v
        });
        assert_eq!(expected_value(&g, &profile, Player::One), 0.0);
    }

    /// Brute-force Kuhn oracle: enumerate deals and betting lines by hand.
    fn kuhn_uniform_value_oracle() -> f64 {
        let mut total = 0.0;
        for c1 in 0..3 {
            for c2 in 0..3 {
                if c1 == c2 {
                    continue;
                }
                let show = if c1 > c2 { 1.0 } else { -1.0 };
                // P1 bet (1/2): P2 call (1/2) -> 2*show, fold -> +1
                let bet = 0.5 * (2.0 * show) + 0.5 * 1.0;
                // P1 check: P2 check -> show; P2 bet -> P1 call 2*show / fold -1
                let check = 0.5 * show + 0.5 * (0.5 * 2.0 * show + 0.5 * -1.0);
                total += (0.5 * bet + 0.5 * check) / 6.0;
            }
        }
        total
    }

    #[test]
    fn kuhn_uniform_value_matches_enumeration() {
        let g = games::build_kuhn();
        let v = expected_value(&g, &StrategyProfile::uniform(&g), Player::One);
        assert!((v - kuhn_uniform_value_oracle()).abs() < 1e-12);
    }

    fn random_profile(game: &Game, seed: u64) -> StrategyProfile {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        StrategyProfile::from_fn(game, |_, _, n| {
            let w: Vec<f64> = (0..n).map(|_| rng.random::<f64>() + 1e-3).collect();
            let s: f64 = w.iter().sum();
            w.into_iter().map(|x| x / s).collect()
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn values_are_zero_sum(seed in any::<u64>()) {
            let g = games::build_kuhn();
            let p = random_profile(&g, seed);
            let [a, b] = expected_values(&g, &p);
            prop_assert!((a + b).abs() < 1e-9);
        }

        #[test]
        fn value_is_linear_in_one_infoset(seed in any::<u64>(), lambda in 0.0f64..1.0, which in 0usize..12) {
            let g = games::build_kuhn();
            let base = random_profile(&g, seed);
            let alt = random_profile(&g, seed.wrapping_add(1));
            let player = if which < 6 { Player::One } else { Player::Two };
            let id = which % 6;
            let mut a = base.clone();
            let mut b = base.clone();
            a.get_mut(player, id).copy_from_slice(base.get(player, id));
            b.get_mut(player, id).copy_from_slice(alt.get(player, id));
            let mut mix = base.clone();
            for (k, m) in mix.get_mut(player, id).iter_mut().enumerate() {
                *m = lambda * a.get(player, id)[k] + (1.0 - lambda) * b.get(player, id)[k];
            }
            let lhs = expected_value(&g, &mix, Player::One);
            let rhs = lambda * expected_value(&g, &a, Player::One)
                + (1.0 - lambda) * expected_value(&g, &b, Player::One);
            prop_assert!((lhs - rhs).abs() < 1e-12);
        }
    }
}
