//! Full-traversal CFR and its discounted variants.
//!
//! Every algorithm in the family is a [`SolveConfig`]: a per-infoset regret
//! minimizer plus a rule for weighting iterations. The named presets are
//! parsed by [`Preset::from_str`](std::str::FromStr).

mod solver;

pub use solver::{instantaneous_regrets, run, CfrSolver, SolveError, SolveOutcome};

use std::fmt;
use std::str::FromStr;

use crate::regret::{DiscountSchedule, Minimizer};

/// How iterations are weighted against each other.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Discounting {
    /// Multiply the accumulators at the end of every iteration.
    Multiplicative(DiscountSchedule),
    /// Scale iteration `t`'s regrets by `t^regret_power` and its average-strategy
    /// contribution by `t^average_power`, never touching past sums.
    IterateWeights { regret_power: f64, average_power: f64 },
}

/// Whether the two players update in turn or from the same iterate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum UpdateMode {
    /// P1 traverses and updates, then P2 does so against P1's new strategy.
    #[default]
    Alternating,
    /// Both players traverse against the same profile before either updates.
    Simultaneous,
}

/// Iterations at which the average profile is evaluated. The final iteration
/// is always included.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub enum EvalSchedule {
    #[default]
    PowersOfTwo,
    Every(u64),
    At(Vec<u64>),
    /// Only the final iteration.
    Final,
}

impl EvalSchedule {
    /// Sorted checkpoints in `1..=iterations`.
    pub fn checkpoints(&self, iterations: u64) -> Vec<u64> {
        let mut out: Vec<u64> = match self {
            EvalSchedule::PowersOfTwo => {
                std::iter::successors(Some(1u64), |&t| t.checked_mul(2)).take_while(|&t| t <= iterations).collect()
            }
            EvalSchedule::Every(n) => {
                let n = (*n).max(1);
                (1..=iterations / n).map(|k| k * n).collect()
            }
            EvalSchedule::At(list) => list.iter().copied().filter(|&t| t >= 1 && t <= iterations).collect(),
            EvalSchedule::Final => Vec::new(),
        };
        if iterations > 0 {
            out.push(iterations);
        }
        out.sort_unstable();
        out.dedup();
        out
    }
}

impl FromStr for EvalSchedule {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "pow2" => Ok(EvalSchedule::PowersOfTwo),
            "final" => Ok(EvalSchedule::Final),
            n => match n.parse::<u64>() {
                Ok(k) if k > 0 => Ok(EvalSchedule::Every(k)),
                _ => Err(format!("expected pow2, final or a positive integer, got {s:?}")),
            },
        }
    }
}

/// Named algorithm configurations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Preset {
    Cfr,
    CfrPlus,
    Lcfr,
    LcfrPlus,
    Dcfr,
    DcfrPrune,
    NhDcfr,
    OptimisticLcfr,
    OptimisticDcfr,
}

impl Preset {
    pub const ALL: [Preset; 9] = [
        Preset::Cfr,
        Preset::CfrPlus,
        Preset::Lcfr,
        Preset::LcfrPlus,
        Preset::Dcfr,
        Preset::DcfrPrune,
        Preset::NhDcfr,
        Preset::OptimisticLcfr,
        Preset::OptimisticDcfr,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Preset::Cfr => "cfr",
            Preset::CfrPlus => "cfr+",
            Preset::Lcfr => "lcfr",
            Preset::LcfrPlus => "lcfr+",
            Preset::Dcfr => "dcfr",
            Preset::DcfrPrune => "dcfr-prune",
            Preset::NhDcfr => "nh-dcfr",
            Preset::OptimisticLcfr => "optimistic-lcfr",
            Preset::OptimisticDcfr => "optimistic-dcfr",
        }
    }

    /// Minimizer, optimism flag and discount exponents.
    pub fn parts(self) -> (Minimizer, bool, DiscountSchedule) {
        let inf = f64::INFINITY;
        let s = |alpha, beta, gamma| DiscountSchedule { alpha, beta, gamma };
        match self {
            Preset::Cfr => (Minimizer::RegretMatching, false, DiscountSchedule::NONE),
            Preset::CfrPlus => (Minimizer::RegretMatchingPlus, false, s(inf, -inf, 2.0)),
            Preset::Lcfr => (Minimizer::RegretMatching, false, s(1.0, 1.0, 1.0)),
            Preset::LcfrPlus => (Minimizer::RegretMatchingPlus, false, s(1.0, -inf, 1.0)),
            Preset::Dcfr => (Minimizer::RegretMatching, false, s(1.5, 0.0, 2.0)),
            Preset::DcfrPrune => (Minimizer::RegretMatching, false, s(1.5, 0.5, 2.0)),
            Preset::NhDcfr => (Minimizer::NormalHedge, false, s(1.5, 0.0, 2.0)),
            Preset::OptimisticLcfr => (Minimizer::RegretMatching, true, s(1.0, 1.0, 1.0)),
            Preset::OptimisticDcfr => (Minimizer::RegretMatching, true, s(1.5, 0.0, 2.0)),
        }
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.name())
    }
}

impl FromStr for Preset {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Preset::ALL.into_iter().find(|p| p.name() == s).ok_or_else(|| {
            let names: Vec<_> = Preset::ALL.iter().map(|p| p.name()).collect();
            format!("unknown algorithm {s:?}; expected one of {}", names.join(", "))
        })
    }
}

/// Everything that determines a full-traversal solve.
#[derive(Debug, Clone, PartialEq)]
pub struct SolveConfig {
    /// Label written to output files.
    pub label: String,
    pub minimizer: Minimizer,
    /// Count the latest instantaneous regret twice when forming the strategy.
    pub optimistic: bool,
    pub discounting: Discounting,
    pub iterations: u64,
    pub eval: EvalSchedule,
    pub update: UpdateMode,
    /// Record the first iteration whose played profile is pure everywhere.
    pub track_pure_switch: bool,
    /// Keep undiscounted, unfloored regrets alongside the working table.
    pub track_true_regret: bool,
    /// Keep the uniform iterate average and realized values (simultaneous only).
    pub track_history: bool,
}

impl SolveConfig {
    pub fn preset(preset: Preset, iterations: u64) -> Self {
        let (minimizer, optimistic, schedule) = preset.parts();
        Self {
            label: preset.name().to_owned(),
            minimizer,
            optimistic,
            discounting: Discounting::Multiplicative(schedule),
            iterations,
            eval: EvalSchedule::default(),
            update: UpdateMode::default(),
            track_pure_switch: false,
            track_true_regret: false,
            track_history: false,
        }
    }

    /// DCFR with explicit exponents and plain regret matching.
    pub fn dcfr(schedule: DiscountSchedule, iterations: u64) -> Self {
        let mut c = Self::preset(Preset::Dcfr, iterations);
        c.discounting = Discounting::Multiplicative(schedule);
        c.label = format!("dcfr({},{},{})", schedule.alpha, schedule.beta, schedule.gamma);
        c
    }

    /// Iterate-weighted CFR: regrets weighted by `t^regret_power`, averages by
    /// `t^average_power`.
    pub fn weighted(minimizer: Minimizer, regret_power: f64, average_power: f64, iterations: u64) -> Self {
        let mut c = Self::preset(Preset::Cfr, iterations);
        c.minimizer = minimizer;
        c.discounting = Discounting::IterateWeights { regret_power, average_power };
        c.label = format!("{minimizer}-weighted({regret_power},{average_power})");
        c
    }

    pub fn with_eval(mut self, eval: EvalSchedule) -> Self {
        self.eval = eval;
        self
    }

    pub fn with_update(mut self, update: UpdateMode) -> Self {
        self.update = update;
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn preset_tuples() {
        let (m, o, s) = Preset::Dcfr.parts();
        assert_eq!((m, o), (Minimizer::RegretMatching, false));
        assert_eq!((s.alpha, s.beta, s.gamma), (1.5, 0.0, 2.0));
        let (m, _, s) = Preset::CfrPlus.parts();
        assert_eq!(m, Minimizer::RegretMatchingPlus);
        assert_eq!((s.alpha, s.beta, s.gamma), (f64::INFINITY, f64::NEG_INFINITY, 2.0));
        let (_, _, s) = Preset::DcfrPrune.parts();
        assert_eq!((s.alpha, s.beta, s.gamma), (1.5, 0.5, 2.0));
        let (m, _, s) = Preset::LcfrPlus.parts();
        assert_eq!(m, Minimizer::RegretMatchingPlus);
        assert_eq!((s.alpha, s.beta, s.gamma), (1.0, f64::NEG_INFINITY, 1.0));
        assert_eq!(Preset::Cfr.parts().2, DiscountSchedule::NONE);
    }

    #[test]
    fn preset_names_round_trip() {
        for p in Preset::ALL {
            assert_eq!(p.name().parse::<Preset>().unwrap(), p);
            let (_, _, s) = p.parts();
            DiscountSchedule::new(s.alpha, s.beta, s.gamma).unwrap();
        }
        assert!("dcfr2".parse::<Preset>().unwrap_err().contains("dcfr-prune"));
    }

    #[test]
    fn checkpoints() {
        assert_eq!(EvalSchedule::PowersOfTwo.checkpoints(1024).len(), 11);
        assert_eq!(EvalSchedule::PowersOfTwo.checkpoints(10), vec![1, 2, 4, 8, 10]);
        assert_eq!(EvalSchedule::Every(3).checkpoints(10), vec![3, 6, 9, 10]);
        assert_eq!(EvalSchedule::At(vec![0, 5, 5, 20]).checkpoints(10), vec![5, 10]);
        assert_eq!(EvalSchedule::Final.checkpoints(7), vec![7]);
        assert!(EvalSchedule::Final.checkpoints(0).is_empty());
        assert_eq!("pow2".parse::<EvalSchedule>().unwrap(), EvalSchedule::PowersOfTwo);
        assert_eq!("100".parse::<EvalSchedule>().unwrap(), EvalSchedule::Every(100));
        assert!("0".parse::<EvalSchedule>().is_err());
    }
}
