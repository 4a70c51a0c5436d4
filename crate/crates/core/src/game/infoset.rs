use std::collections::HashMap;
use std::ops::Range;

use super::{GameError, GameTree, NodeId, NodeKind, Player};

#[derive(Debug, Clone, PartialEq)]
pub struct InfosetInfo {
    pub key: String,
    pub actions: Vec<String>,
    /// Decision nodes belonging to this infoset, in discovery order.
    pub members: Vec<NodeId>,
}

impl InfosetInfo {
    pub fn num_actions(&self) -> usize {
        self.actions.len()
    }
}

/// Dense infoset ids for one player plus the layout of flat per-action tables.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct PlayerInfosets {
    infos: Vec<InfosetInfo>,
    by_key: HashMap<String, usize>,
    offsets: Vec<usize>,
    total_actions: usize,
}

impl PlayerInfosets {
    pub fn len(&self) -> usize {
        self.infos.len()
    }

    pub fn is_empty(&self) -> bool {
        self.infos.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, InfosetInfo> {
        self.infos.iter()
    }

    pub fn info(&self, id: usize) -> &InfosetInfo {
        &self.infos[id]
    }

    pub fn id_of(&self, key: &str) -> Option<usize> {
        self.by_key.get(key).copied()
    }

    /// Slots of infoset `id` in a flat per-action table.
    #[inline]
    pub fn range(&self, id: usize) -> Range<usize> {
        self.offsets[id]..self.offsets[id + 1]
    }

    pub fn offsets(&self) -> &[usize] {
        &self.offsets
    }

    /// Length of a flat table holding one value per (infoset, action).
    pub fn total_actions(&self) -> usize {
        self.total_actions
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct InfosetIndex {
    players: [PlayerInfosets; 2],
}

impl InfosetIndex {
    #[inline]
    pub fn player(&self, player: Player) -> &PlayerInfosets {
        &self.players[player.index()]
    }

    pub fn count(&self, player: Player) -> usize {
        self.players[player.index()].len()
    }

    /// Total number of infosets over both players.
    pub fn total_count(&self) -> usize {
        self.players[0].len() + self.players[1].len()
    }

    /// Largest action count of any infoset.
    pub fn max_actions(&self) -> usize {
        self.players
            .iter()
            .flat_map(|p| p.infos.iter().map(InfosetInfo::num_actions))
            .max()
            .unwrap_or(0)
    }
}

/// Assigns dense ids to every decision infoset in depth-first discovery order.
pub fn enumerate_infosets(tree: &GameTree) -> Result<InfosetIndex, GameError> {
    let mut players: [PlayerInfosets; 2] = Default::default();
    let Some(root) = tree.root() else {
        return Ok(InfosetIndex { players });
    };

    let mut visited = vec![false; tree.len()];
    let mut stack = vec![root];
    while let Some(id) = stack.pop() {
        if id >= tree.len() || std::mem::replace(&mut visited[id], true) {
            continue;
        }
        let node = tree.node(id);
        if let NodeKind::Decision { player, infoset } = &node.kind {
            let table = &mut players[player.index()];
            match table.by_key.get(infoset) {
                Some(&existing) => {
                    let info = &mut table.infos[existing];
                    if info.actions.len() != node.children.len() {
                        return Err(GameError::InconsistentInfoset {
                            player: *player,
                            key: infoset.clone(),
                            expected: info.actions.len(),
                            found: node.children.len(),
                        });
                    }
                    info.members.push(id);
                }
                None => {
                    table.by_key.insert(infoset.clone(), table.infos.len());
                    table.infos.push(InfosetInfo {
                        key: infoset.clone(),
                        actions: node.actions.clone(),
                        members: vec![id],
                    });
                }
            }
        }
        // Reverse so the first child is explored first.
        stack.extend(node.children.iter().rev());
    }

    for table in &mut players {
        let mut offset = 0;
        table.offsets = Vec::with_capacity(table.infos.len() + 1);
        for info in &table.infos {
            table.offsets.push(offset);
            offset += info.num_actions();
        }
        table.offsets.push(offset);
        table.total_actions = offset;
    }
    Ok(InfosetIndex { players })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::games::{self, MatrixGameSpec};

    #[test]
    fn matrix_game_has_one_infoset_each() {
        let game = games::build_matrix_game(&MatrixGameSpec::new(vec![vec![1.0, 0.9], vec![-0.7, 1.0]]).unwrap())
            .unwrap();
        let index = game.infosets();
        for p in Player::BOTH {
            assert_eq!(index.count(p), 1);
            assert_eq!(index.player(p).info(0).num_actions(), 2);
        }
    }

    #[test]
    fn deterministic_ids() {
        let game = games::build_leduc();
        let a = enumerate_infosets(game.tree()).unwrap();
        let b = enumerate_infosets(game.tree()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn discovery_order_is_depth_first() {
        let game = games::build_kuhn();
        let p1 = game.infosets().player(Player::One);
        // The first deal explored is the first chance outcome; its opening
        // decision is discovered before anything else of P1.
        let first_deal = &game.node(game.root()).actions[0];
        assert!(p1.info(0).key.starts_with(&first_deal[..1]));
        assert_eq!(p1.range(0), 0..2);
        assert_eq!(p1.total_actions(), 12);
    }

    #[test]
    fn inconsistent_counts_are_structural_errors() {
        let mut t = GameTree::new();
        let z: Vec<_> = (0..5).map(|_| t.terminal(0.0)).collect();
        let x = t.decision(Player::Two, "j", vec![("a", z[0]), ("b", z[1])]);
        let y = t.decision(Player::Two, "j", vec![("a", z[2]), ("b", z[3]), ("c", z[4])]);
        t.decision(Player::One, "i", vec![("l", x), ("r", y)]);
        let err = enumerate_infosets(&t).unwrap_err();
        assert!(matches!(err, GameError::InconsistentInfoset { expected: 2, found: 3, .. }));
    }
}
