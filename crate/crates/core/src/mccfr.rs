//! External-sampling Monte Carlo CFR with period-based discounting.
//!
//! Each iteration runs one sampled traversal per player. Chance and opponent
//! actions are sampled from their distributions, the traverser's actions are
//! all expanded. Progress is measured in nodes touched: every node visit,
//! terminals included.
//!
//! Runs are reproducible: a run seeded with `s` draws from
//! `ChaCha8Rng::seed_from_u64(s)`, and multi-seed runs use seeds
//! `base, base + 1, ...`.

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::cfr::{EvalSchedule, SolveError};
use crate::eval::{measure, ConvergenceRecord};
use crate::game::{Game, NodeId, NodeKind, Player, StrategyProfile};
use crate::regret::rm_strategy;

/// Default discount period for desk-scale games.
pub const DEFAULT_PERIOD_NODES: u64 = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MccfrVariant {
    Vanilla,
    /// Multiply every accumulator by `n/(n+1)` when period `n` ends.
    Discounted,
    /// Multiply every accumulator by `1/10` once, when the first period ends.
    InitialDiscount,
}

impl MccfrVariant {
    pub const ALL: [MccfrVariant; 3] =
        [MccfrVariant::Vanilla, MccfrVariant::Discounted, MccfrVariant::InitialDiscount];

    pub fn name(self) -> &'static str {
        match self {
            MccfrVariant::Vanilla => "mccfr",
            MccfrVariant::Discounted => "mccfr-discount",
            MccfrVariant::InitialDiscount => "mccfr-initial-discount",
        }
    }

    /// Multiplier applied when period `n >= 1` ends.
    pub fn period_multiplier(self, n: u64) -> f64 {
        match self {
            MccfrVariant::Vanilla => 1.0,
            MccfrVariant::Discounted => n as f64 / (n as f64 + 1.0),
            MccfrVariant::InitialDiscount if n == 1 => 0.1,
            MccfrVariant::InitialDiscount => 1.0,
        }
    }
}

impl fmt::Display for MccfrVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.name())
    }
}

impl FromStr for MccfrVariant {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        MccfrVariant::ALL
            .into_iter()
            .find(|v| v.name() == s)
            .ok_or_else(|| format!("unknown MCCFR variant {s:?}"))
    }
}

/// One external-sampling run.
#[derive(Debug, Clone, PartialEq)]
pub struct MccfrConfig {
    pub variant: MccfrVariant,
    /// Stop after the first iteration that reaches this many nodes touched.
    pub node_budget: u64,
    pub period_nodes: u64,
    pub seed: u64,
    /// Evaluation thresholds, in nodes touched. The budget is always included.
    pub eval: EvalSchedule,
}

impl MccfrConfig {
    pub fn new(variant: MccfrVariant, node_budget: u64, seed: u64) -> Self {
        Self { variant, node_budget, period_nodes: DEFAULT_PERIOD_NODES, seed, eval: EvalSchedule::PowersOfTwo }
    }
}

/// Per-player regret and average-strategy tables plus the sampling state.
#[derive(Debug, Clone)]
pub struct MccfrSolver<'g> {
    game: &'g Game,
    variant: MccfrVariant,
    period_nodes: u64,
    rng: ChaCha8Rng,
    regret: [Vec<f64>; 2],
    avg: [Vec<f64>; 2],
    iteration: u64,
    nodes_touched: u64,
    periods_done: u64,
}

impl<'g> MccfrSolver<'g> {
    pub fn new(game: &'g Game, variant: MccfrVariant, period_nodes: u64, seed: u64) -> Self {
        assert!(period_nodes > 0, "period length must be positive");
        let sizes = Player::BOTH.map(|p| game.infosets().player(p).total_actions());
        Self {
            game,
            variant,
            period_nodes,
            rng: ChaCha8Rng::seed_from_u64(seed),
            regret: sizes.map(|n| vec![0.0; n]),
            avg: sizes.map(|n| vec![0.0; n]),
            iteration: 0,
            nodes_touched: 0,
            periods_done: 0,
        }
    }

    pub fn iteration(&self) -> u64 {
        self.iteration
    }

    pub fn nodes_touched(&self) -> u64 {
        self.nodes_touched
    }

    /// Completed discount periods.
    pub fn periods_done(&self) -> u64 {
        self.periods_done
    }

    pub fn regrets(&self, player: Player) -> &[f64] {
        &self.regret[player.index()]
    }

    pub fn strategy_sums(&self, player: Player) -> &[f64] {
        &self.avg[player.index()]
    }

    /// One sampled traversal for `player`, reporting each visited node to
    /// `observer`, followed by any period discount now due. Returns the
    /// sampled value for `player`.
    pub fn traverse_observed(&mut self, player: Player, observer: impl FnMut(NodeId)) -> f64 {
        let mut pass = Sampler {
            game: self.game,
            traverser: player,
            fixed: None,
            rng: &mut self.rng,
            regret: &mut self.regret,
            avg: &mut self.avg,
            observer,
            nodes: 0,
            stack: Vec::new(),
        };
        let value = pass.walk(self.game.root());
        self.nodes_touched += pass.nodes;
        self.close_periods();
        value
    }

    pub fn traverse(&mut self, player: Player) -> f64 {
        self.traverse_observed(player, |_| {})
    }

    fn close_periods(&mut self) {
        while self.nodes_touched >= (self.periods_done + 1) * self.period_nodes {
            self.periods_done += 1;
            let m = self.variant.period_multiplier(self.periods_done);
            if m != 1.0 {
                for table in self.regret.iter_mut().chain(self.avg.iter_mut()) {
                    table.iter_mut().for_each(|x| *x *= m);
                }
            }
        }
    }

    /// One traversal for each player, P1 first.
    pub fn step(&mut self) -> Result<(), SolveError> {
        let t = self.iteration + 1;
        for p in Player::BOTH {
            self.traverse(p);
        }
        for player in Player::BOTH {
            let i = player.index();
            let bad = self.regret[i].iter().chain(&self.avg[i]).position(|x| !x.is_finite());
            if let Some(j) = bad {
                let j = j % self.regret[i].len();
                let infosets = self.game.infosets().player(player);
                let id = (0..infosets.len()).find(|&id| infosets.range(id).contains(&j)).unwrap_or(0);
                return Err(SolveError::NonFinite { iteration: t, player, infoset: infosets.info(id).key.clone() });
            }
        }
        self.iteration = t;
        Ok(())
    }

    /// Normalized average strategy, uniform where nothing accumulated.
    pub fn average_profile(&self) -> StrategyProfile {
        let flat = Player::BOTH.map(|p| {
            let sums = &self.avg[p.index()];
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
}

struct Sampler<'a, O> {
    game: &'a Game,
    traverser: Player,
    /// Play this profile instead of regret matching over the tables.
    fixed: Option<&'a StrategyProfile>,
    rng: &'a mut ChaCha8Rng,
    regret: &'a mut [Vec<f64>; 2],
    avg: &'a mut [Vec<f64>; 2],
    observer: O,
    nodes: u64,
    /// Strategies and child values of the nodes on the current path.
    stack: Vec<f64>,
}

fn sample(rng: &mut ChaCha8Rng, probs: &[f64]) -> usize {
    let u: f64 = rng.random();
    let mut cumulative = 0.0;
    let mut last = 0;
    for (a, &p) in probs.iter().enumerate() {
        if p > 0.0 {
            cumulative += p;
            last = a;
            if u < cumulative {
                return a;
            }
        }
    }
    last
}

impl<O: FnMut(NodeId)> Sampler<'_, O> {
    fn walk(&mut self, node: NodeId) -> f64 {
        self.nodes += 1;
        (self.observer)(node);
        let game = self.game;
        let n = game.node(node);
        match &n.kind {
            NodeKind::Terminal { payoffs } => payoffs[self.traverser.index()],
            NodeKind::Chance { probs } => {
                let a = sample(self.rng, probs);
                self.walk(n.children[a])
            }
            NodeKind::Decision { player, .. } => {
                let p = player.index();
                let id = game.infoset_of(node).expect("decision node has an infoset");
                let range = game.infosets().player(*player).range(id);
                let k = range.len();
                let start = self.stack.len();
                self.stack.resize(start + k, 0.0);
                match self.fixed {
                    Some(profile) => self.stack[start..].copy_from_slice(profile.get(*player, id)),
                    None => rm_strategy(&self.regret[p][range.clone()], &mut self.stack[start..]),
                }
                let value = if *player != self.traverser {
                    for a in 0..k {
                        self.avg[p][range.start + a] += self.stack[start + a];
                    }
                    let a = sample(self.rng, &self.stack[start..]);
                    self.walk(n.children[a])
                } else {
                    let mut v = 0.0;
                    for a in 0..k {
                        let child = self.walk(n.children[a]);
                        v += self.stack[start + a] * child;
                        self.stack.push(child);
                    }
                    for a in 0..k {
                        self.regret[p][range.start + a] += self.stack[start + k + a] - v;
                    }
                    v
                };
                self.stack.truncate(start);
                value
            }
        }
    }
}

/// Sampled counterfactual regrets of one traversal for `player` under a fixed
/// profile. Their expectation is the full-traversal counterfactual regret.
pub fn sampled_regrets(game: &Game, profile: &StrategyProfile, player: Player, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let sizes = Player::BOTH.map(|p| game.infosets().player(p).total_actions());
    let mut regret = sizes.map(|n| vec![0.0; n]);
    let mut avg = sizes.map(|n| vec![0.0; n]);
    let mut pass = Sampler {
        game,
        traverser: player,
        fixed: Some(profile),
        rng,
        regret: &mut regret,
        avg: &mut avg,
        observer: |_| {},
        nodes: 0,
        stack: Vec::new(),
    };
    pass.walk(game.root());
    let [r1, r2] = regret;
    match player {
        Player::One => r1,
        Player::Two => r2,
    }
}

/// Result of [`run_mccfr`]. `thresholds[k]` is the evaluation threshold that
/// `records[k]` was taken at; the record holds the actual node count.
#[derive(Debug, Clone)]
pub struct MccfrOutcome {
    pub seed: u64,
    pub average: StrategyProfile,
    pub records: Vec<ConvergenceRecord>,
    pub thresholds: Vec<u64>,
    pub iterations: u64,
    pub nodes_touched: u64,
}

/// Runs iterations until `node_budget` nodes have been touched, evaluating at
/// the first iteration boundary past each threshold.
pub fn run_mccfr(game: &Game, config: &MccfrConfig) -> Result<MccfrOutcome, SolveError> {
    let thresholds = config.eval.checkpoints(config.node_budget);
    let mut solver = MccfrSolver::new(game, config.variant, config.period_nodes, config.seed);
    let mut records = Vec::with_capacity(thresholds.len());
    let mut hit = Vec::with_capacity(thresholds.len());
    let mut next = 0;
    let mut elapsed = Duration::ZERO;
    while solver.nodes_touched() < config.node_budget {
        let start = Instant::now();
        solver.step()?;
        elapsed += start.elapsed();
        let mut crossed = None;
        while next < thresholds.len() && thresholds[next] <= solver.nodes_touched() {
            crossed = Some(thresholds[next]);
            next += 1;
        }
        if let Some(threshold) = crossed {
            let e = measure(game, &solver.average_profile());
            records.push(ConvergenceRecord::new(
                solver.iteration(),
                solver.nodes_touched(),
                elapsed.as_secs_f64() * 1000.0,
                e,
            ));
            hit.push(threshold);
        }
    }
    Ok(MccfrOutcome {
        seed: config.seed,
        average: solver.average_profile(),
        records,
        thresholds: hit,
        iterations: solver.iteration(),
        nodes_touched: solver.nodes_touched(),
    })
}

/// Runs seeds `config.seed .. config.seed + count` in parallel on the current
/// rayon pool. Results are in seed order.
pub fn run_mccfr_seeds(game: &Game, config: &MccfrConfig, count: u64) -> Result<Vec<MccfrOutcome>, SolveError> {
    (0..count)
        .into_par_iter()
        .map(|i| run_mccfr(game, &MccfrConfig { seed: config.seed.wrapping_add(i), ..config.clone() }))
        .collect()
}
