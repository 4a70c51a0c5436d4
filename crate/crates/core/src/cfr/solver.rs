use std::time::{Duration, Instant};

use super::{Discounting, SolveConfig, UpdateMode};
use crate::eval::{measure, ConvergenceRecord, IterateHistory};
use crate::game::{Game, NodeId, NodeKind, Player, StrategyProfile};
use crate::regret::{discount_multipliers, optimistic_regret, NumericError};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SolveError {
    #[error("numeric failure at iteration {iteration}: {source}")]
    Numeric { iteration: u64, source: NumericError },
    #[error("non-finite accumulator at iteration {iteration} in {player} infoset {infoset:?}")]
    NonFinite { iteration: u64, player: Player, infoset: String },
}

#[derive(Debug, Clone)]
struct Tables {
    regret: Vec<f64>,
    avg: Vec<f64>,
    /// Latest weighted instantaneous regret; empty unless optimistic.
    last: Vec<f64>,
    /// Plain running sum of weighted instantaneous regrets; empty unless tracked.
    true_regret: Vec<f64>,
    /// Uniformly weighted reach-weighted strategy sums; empty unless tracked.
    reach_sum: Vec<f64>,
}

/// One full-traversal CFR run. Owns all mutable state, so separate solvers
/// can run on separate threads over a shared [`Game`].
#[derive(Debug, Clone)]
pub struct CfrSolver<'g> {
    game: &'g Game,
    config: SolveConfig,
    tables: [Tables; 2],
    current: [Vec<f64>; 2],
    inst: [Vec<f64>; 2],
    iteration: u64,
    nodes_touched: u64,
    pure_switch: Option<u64>,
    value_sums: [f64; 2],
}

impl<'g> CfrSolver<'g> {
    pub fn new(game: &'g Game, config: SolveConfig) -> Self {
        assert!(
            !config.track_history || config.update == UpdateMode::Simultaneous,
            "iterate history is only defined for simultaneous updates"
        );
        let tables = Player::BOTH.map(|p| {
            let n = game.infosets().player(p).total_actions();
            let opt = |on: bool| if on { vec![0.0; n] } else { Vec::new() };
            Tables {
                regret: vec![0.0; n],
                avg: vec![0.0; n],
                last: opt(config.optimistic),
                true_regret: opt(config.track_true_regret),
                reach_sum: opt(config.track_history),
            }
        });
        let sizes = Player::BOTH.map(|p| game.infosets().player(p).total_actions());
        Self {
            game,
            config,
            tables,
            current: sizes.map(|n| vec![0.0; n]),
            inst: sizes.map(|n| vec![0.0; n]),
            iteration: 0,
            nodes_touched: 0,
            pure_switch: None,
            value_sums: [0.0; 2],
        }
    }

    pub fn game(&self) -> &'g Game {
        self.game
    }

    pub fn config(&self) -> &SolveConfig {
        &self.config
    }

    /// Completed iterations.
    pub fn iteration(&self) -> u64 {
        self.iteration
    }

    pub fn nodes_touched(&self) -> u64 {
        self.nodes_touched
    }

    /// First iteration whose played profile was pure at every infoset.
    pub fn pure_switch(&self) -> Option<u64> {
        self.pure_switch
    }

    /// Cumulative regrets (floored for RM+), flat per player.
    pub fn regrets(&self, player: Player) -> &[f64] {
        &self.tables[player.index()].regret
    }

    /// Undiscounted, unfloored regrets when `track_true_regret` is set.
    pub fn true_regrets(&self, player: Player) -> Option<&[f64]> {
        let t = &self.tables[player.index()].true_regret;
        self.config.track_true_regret.then_some(t.as_slice())
    }

    /// Average-strategy numerators, flat per player.
    pub fn strategy_sums(&self, player: Player) -> &[f64] {
        &self.tables[player.index()].avg
    }

    /// Regret of one infoset: the largest cumulative action regret, floored at 0.
    pub fn infoset_regret(&self, player: Player, infoset: usize) -> f64 {
        let range = self.game.infosets().player(player).range(infoset);
        self.regrets(player)[range].iter().fold(0.0f64, |m, &r| m.max(r))
    }

    fn refresh(&mut self, player: Player, iteration: u64) -> Result<(), SolveError> {
        let p = player.index();
        let infosets = self.game.infosets().player(player);
        let mut scratch = Vec::new();
        for id in 0..infosets.len() {
            let range = infosets.range(id);
            let regrets = &self.tables[p].regret[range.clone()];
            let out = &mut self.current[p][range.clone()];
            let res = if self.config.optimistic {
                scratch.resize(range.len(), 0.0);
                optimistic_regret(regrets, &self.tables[p].last[range], &mut scratch);
                self.config.minimizer.strategy(&scratch, out)
            } else {
                self.config.minimizer.strategy(regrets, out)
            };
            res.map_err(|source| SolveError::Numeric { iteration, source })?;
        }
        Ok(())
    }

    /// The profile the next iteration will play, computed from the tables as
    /// they stand now.
    pub fn current_profile(&self) -> Result<StrategyProfile, SolveError> {
        let mut copy = self.clone();
        for p in Player::BOTH {
            copy.refresh(p, self.iteration + 1)?;
        }
        let [p1, p2] = copy.current;
        Ok(StrategyProfile::from_flat(self.game, p1, p2))
    }

    /// Normalized average-strategy numerators, uniform where nothing accumulated.
    pub fn average_profile(&self) -> StrategyProfile {
        self.normalized(|t| &t.avg)
    }

    fn normalized(&self, table: impl Fn(&Tables) -> &Vec<f64>) -> StrategyProfile {
        let flat = Player::BOTH.map(|p| {
            let sums = table(&self.tables[p.index()]);
            let infosets = self.game.infosets().player(p);
            let mut out = vec![0.0; sums.len()];
            for id in 0..infosets.len() {
                let range = infosets.range(id);
                let total: f64 = sums[range.clone()].iter().sum();
                let n = range.len() as f64;
                for j in range {
                    out[j] = if total > 0.0 { sums[j] / total } else { 1.0 / n };
                }
            }
            out
        });
        let [p1, p2] = flat;
        StrategyProfile::from_flat(self.game, p1, p2)
    }

    /// Uniform iterate summary for whole-game regret, when tracked.
    pub fn history(&self) -> Option<IterateHistory> {
        self.config.track_history.then(|| IterateHistory {
            iterations: self.iteration,
            value_sums: self.value_sums,
            average: self.normalized(|t| &t.reach_sum),
        })
    }

    fn traverse(&mut self, player: Player, t: u64) -> f64 {
        let avg_weight = match self.config.discounting {
            Discounting::Multiplicative(_) => 1.0,
            Discounting::IterateWeights { average_power, .. } => (t as f64).powf(average_power),
        };
        let p = player.index();
        let tables = &mut self.tables[p];
        let mut pass = Pass {
            game: self.game,
            player,
            strategies: &self.current,
            inst: &mut self.inst[p],
            avg: &mut tables.avg,
            avg_weight,
            reach_sum: &mut tables.reach_sum,
            stack: Vec::new(),
            nodes: 0,
        };
        let value = pass.walk(self.game.root(), 1.0, 1.0);
        self.nodes_touched += pass.nodes;
        value
    }

    fn apply(&mut self, player: Player, t: u64) {
        let w = match self.config.discounting {
            Discounting::Multiplicative(_) => 1.0,
            Discounting::IterateWeights { regret_power, .. } => (t as f64).powf(regret_power),
        };
        let floor = self.config.minimizer.floors_regret();
        let p = player.index();
        let tables = &mut self.tables[p];
        for (j, r) in self.inst[p].iter_mut().enumerate() {
            let weighted = *r * w;
            *r = 0.0;
            if !tables.last.is_empty() {
                tables.last[j] = weighted;
            }
            if !tables.true_regret.is_empty() {
                tables.true_regret[j] += weighted;
            }
            let q = tables.regret[j] + weighted;
            tables.regret[j] = if floor { q.max(0.0) } else { q };
        }
    }

    fn discount(&mut self, t: u64) {
        let Discounting::Multiplicative(schedule) = self.config.discounting else {
            return;
        };
        let m = discount_multipliers(t, &schedule);
        for tables in &mut self.tables {
            if m.positive != 1.0 || m.negative != 1.0 {
                for r in &mut tables.regret {
                    if *r > 0.0 {
                        *r *= m.positive;
                    } else if *r < 0.0 {
                        *r *= m.negative;
                    }
                }
            }
            if m.average != 1.0 {
                tables.avg.iter_mut().for_each(|s| *s *= m.average);
            }
        }
    }

    fn check_finite(&self, iteration: u64) -> Result<(), SolveError> {
        for player in Player::BOTH {
            let t = &self.tables[player.index()];
            let bad = t.regret.iter().chain(&t.avg).position(|x| !x.is_finite());
            if let Some(j) = bad {
                let j = j % t.regret.len();
                let infosets = self.game.infosets().player(player);
                let id = (0..infosets.len()).find(|&id| infosets.range(id).contains(&j)).unwrap_or(0);
                return Err(SolveError::NonFinite {
                    iteration,
                    player,
                    infoset: infosets.info(id).key.clone(),
                });
            }
        }
        Ok(())
    }

    fn all_pure(&self) -> bool {
        Player::BOTH.iter().all(|&p| {
            let infosets = self.game.infosets().player(p);
            (0..infosets.len()).all(|id| self.current[p.index()][infosets.range(id)].contains(&1.0))
        })
    }

    /// Runs one iteration: both players' traversals and updates, then the
    /// end-of-iteration discount.
    pub fn step(&mut self) -> Result<(), SolveError> {
        let t = self.iteration + 1;
        for p in Player::BOTH {
            self.refresh(p, t)?;
        }
        if self.config.track_pure_switch && self.pure_switch.is_none() && self.all_pure() {
            self.pure_switch = Some(t);
        }
        match self.config.update {
            UpdateMode::Alternating => {
                self.traverse(Player::One, t);
                self.apply(Player::One, t);
                self.refresh(Player::One, t)?;
                self.traverse(Player::Two, t);
                self.apply(Player::Two, t);
            }
            UpdateMode::Simultaneous => {
                let v1 = self.traverse(Player::One, t);
                let v2 = self.traverse(Player::Two, t);
                self.value_sums[0] += v1;
                self.value_sums[1] += v2;
                self.apply(Player::One, t);
                self.apply(Player::Two, t);
            }
        }
        self.discount(t);
        self.check_finite(t)?;
        self.iteration = t;
        Ok(())
    }
}

/// One traversal for `player`: accumulates counterfactual regrets and
/// reach-weighted strategy contributions, returns `player`'s expected value.
struct Pass<'a> {
    game: &'a Game,
    player: Player,
    strategies: &'a [Vec<f64>; 2],
    inst: &'a mut [f64],
    avg: &'a mut [f64],
    avg_weight: f64,
    reach_sum: &'a mut [f64],
    stack: Vec<f64>,
    nodes: u64,
}

impl Pass<'_> {
    fn walk(&mut self, node: NodeId, reach_me: f64, reach_opp: f64) -> f64 {
        if reach_me == 0.0 && reach_opp == 0.0 {
            return 0.0;
        }
        self.nodes += 1;
        let game = self.game;
        let n = game.node(node);
        match &n.kind {
            NodeKind::Terminal { payoffs } => payoffs[self.player.index()],
            NodeKind::Chance { probs } => {
                let mut v = 0.0;
                for (&p, &c) in probs.iter().zip(&n.children) {
                    v += p * self.walk(c, reach_me, reach_opp * p);
                }
                v
            }
            NodeKind::Decision { player, .. } => {
                let id = game.infoset_of(node).expect("decision node has an infoset");
                let base = game.infosets().player(*player).range(id).start;
                let k = n.children.len();
                let strategies = self.strategies;
                let sigma = &strategies[player.index()][base..base + k];
                if *player != self.player {
                    let mut v = 0.0;
                    for (&s, &c) in sigma.iter().zip(&n.children) {
                        v += s * self.walk(c, reach_me, reach_opp * s);
                    }
                    return v;
                }
                let start = self.stack.len();
                let mut v = 0.0;
                for (&s, &c) in sigma.iter().zip(&n.children) {
                    let child = self.walk(c, reach_me * s, reach_opp);
                    self.stack.push(child);
                    v += s * child;
                }
                if reach_opp != 0.0 {
                    for a in 0..k {
                        self.inst[base + a] += reach_opp * (self.stack[start + a] - v);
                    }
                }
                if reach_me != 0.0 {
                    for (a, &s) in sigma.iter().enumerate() {
                        self.avg[base + a] += self.avg_weight * reach_me * s;
                    }
                    if !self.reach_sum.is_empty() {
                        for (a, &s) in sigma.iter().enumerate() {
                            self.reach_sum[base + a] += reach_me * s;
                        }
                    }
                }
                self.stack.truncate(start);
                v
            }
        }
    }
}

/// Counterfactual regrets `sum_h pi_-i(h) (v(h.a) - v(h))` of every infoset of
/// `player` under `profile`, flat in table order. Touches no solver state.
pub fn instantaneous_regrets(game: &Game, profile: &StrategyProfile, player: Player) -> Vec<f64> {
    let strategies = [profile.flat(Player::One).to_vec(), profile.flat(Player::Two).to_vec()];
    let n = game.infosets().player(player).total_actions();
    let mut inst = vec![0.0; n];
    let mut avg = vec![0.0; n];
    let mut pass = Pass {
        game,
        player,
        strategies: &strategies,
        inst: &mut inst,
        avg: &mut avg,
        avg_weight: 1.0,
        reach_sum: &mut [],
        stack: Vec::new(),
        nodes: 0,
    };
    pass.walk(game.root(), 1.0, 1.0);
    inst
}

/// Result of [`run`].
#[derive(Debug, Clone)]
pub struct SolveOutcome {
    pub average: StrategyProfile,
    pub records: Vec<ConvergenceRecord>,
    pub pure_switch: Option<u64>,
    pub iterations: u64,
    pub nodes_touched: u64,
}

/// Runs `config.iterations` iterations, evaluating the average profile at
/// every scheduled checkpoint. Evaluation time is excluded from `elapsed_ms`.
pub fn run(game: &Game, config: SolveConfig) -> Result<SolveOutcome, SolveError> {
    let checkpoints = config.eval.checkpoints(config.iterations);
    let iterations = config.iterations;
    let mut solver = CfrSolver::new(game, config);
    let mut records = Vec::with_capacity(checkpoints.len());
    let mut elapsed = Duration::ZERO;
    let mut next = checkpoints.iter().peekable();
    while solver.iteration() < iterations {
        let start = Instant::now();
        solver.step()?;
        elapsed += start.elapsed();
        if next.peek() == Some(&&solver.iteration()) {
            next.next();
            let e = measure(game, &solver.average_profile());
            records.push(ConvergenceRecord::new(
                solver.iteration(),
                solver.nodes_touched(),
                elapsed.as_secs_f64() * 1000.0,
                e,
            ));
        }
    }
    Ok(SolveOutcome {
        average: solver.average_profile(),
        records,
        pure_switch: solver.pure_switch(),
        iterations: solver.iteration(),
        nodes_touched: solver.nodes_touched(),
    })
}
