//! Per-infoset strategy rules and the discount multipliers used by the
//! discounted CFR family.
//!
//! Everything here is a pure function over slices of per-action values.

use std::fmt;

/// Failures raised while turning regrets into strategies.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum NumericError {
    #[error("NormalHedge scale search did not converge after {iterations} steps (bracket [{lo:e}, {hi:e}], residual {residual:e})")]
    NormalHedge { iterations: usize, lo: f64, hi: f64, residual: f64 },
    #[error("non-finite regret {value} at action {action}")]
    NonFinite { action: usize, value: f64 },
}

/// Regret matching: probabilities proportional to positive regret, uniform
/// when no action has positive regret.
pub fn rm_strategy(regrets: &[f64], out: &mut [f64]) {
    assert!(!regrets.is_empty(), "regret matching needs at least one action");
    debug_assert_eq!(regrets.len(), out.len());
    let mut total = 0.0;
    for (o, &r) in out.iter_mut().zip(regrets) {
        *o = r.max(0.0);
        total += *o;
    }
    if total > 0.0 {
        let inv = 1.0 / total;
        out.iter_mut().for_each(|o| *o *= inv);
    } else {
        out.fill(1.0 / out.len() as f64);
    }
}

/// Allocating form of [`rm_strategy`].
pub fn regret_matching(regrets: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; regrets.len()];
    rm_strategy(regrets, &mut out);
    out
}

/// RM+ accumulation: `q <- max(0, q + r)` elementwise.
pub fn rm_plus_update(q: &mut [f64], instantaneous: &[f64]) {
    debug_assert_eq!(q.len(), instantaneous.len());
    for (q, &r) in q.iter_mut().zip(instantaneous) {
        *q = (*q + r).max(0.0);
    }
}

/// Optimistic regret: the cumulative regret with the latest instantaneous
/// regret counted a second time.
pub fn optimistic_regret(cumulative: &[f64], last: &[f64], out: &mut [f64]) {
    assert_eq!(cumulative.len(), last.len(), "optimistic rule needs the last instantaneous regret");
    for ((o, &r), &l) in out.iter_mut().zip(cumulative).zip(last) {
        *o = r + l;
    }
}

/// Result of the NormalHedge line search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormalHedgeState {
    /// The solved scale `c`, in the units of the input regrets. Zero when no
    /// action has positive regret (the uniform fallback).
    pub scale: f64,
    /// Bisection steps used.
    pub iterations: usize,
}

const NH_MAX_STEPS: usize = 200;
const NH_TOLERANCE: f64 = 1e-12;

/// Left side of the NormalHedge constraint minus `e`, for regrets already
/// floored at zero.
fn nh_residual(positive: &[f64], scale: f64) -> f64 {
    let n = positive.len() as f64;
    positive.iter().map(|r| (r * r / (2.0 * scale)).exp()).sum::<f64>() / n - std::f64::consts::E
}

/// Solves `mean_a exp(R+(a)^2 / 2c) = e` for `c` by bisection.
///
/// The strategy is invariant to a common rescaling of the regrets, so the
/// search runs on regrets divided by their maximum, where the root always lies
/// inside `[1e-12, 1]`.
pub fn nh_scale(regrets: &[f64]) -> Result<NormalHedgeState, NumericError> {
    let max = regrets.iter().fold(0.0f64, |m, &r| m.max(r));
    if !max.is_finite() {
        let action = regrets.iter().position(|r| !r.is_finite()).unwrap_or(0);
        return Err(NumericError::NonFinite { action, value: regrets[action] });
    }
    if max <= 0.0 {
        return Ok(NormalHedgeState { scale: 0.0, iterations: 0 });
    }
    let positive: Vec<f64> = regrets.iter().map(|&r| r.max(0.0) / max).collect();

    let mut lo = 1e-12;
    let mut hi = 1.0;
    while nh_residual(&positive, hi) >= 0.0 {
        hi *= 10.0;
    }
    let mut best = (f64::INFINITY, hi);
    for step in 1..=NH_MAX_STEPS {
        let mid = 0.5 * (lo + hi);
        let residual = nh_residual(&positive, mid);
        if residual.abs() < best.0 {
            best = (residual.abs(), mid);
        }
        if residual.abs() <= NH_TOLERANCE * std::f64::consts::E {
            return Ok(NormalHedgeState { scale: mid * max * max, iterations: step });
        }
        if residual > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= f64::EPSILON * hi {
            break;
        }
    }
    // Bracket exhausted at machine precision: accept the best point if it is
    // still accurate enough for the strategy.
    if best.0 <= 1e-10 * std::f64::consts::E {
        return Ok(NormalHedgeState { scale: best.1 * max * max, iterations: NH_MAX_STEPS });
    }
    Err(NumericError::NormalHedge {
        iterations: NH_MAX_STEPS,
        lo: lo * max * max,
        hi: hi * max * max,
        residual: best.0 / std::f64::consts::E,
    })
}

/// NormalHedge: weights `(R+/c) exp(R+^2 / 2c)`, normalized. Uniform when no
/// regret is positive; actions without positive regret get zero.
pub fn nh_strategy(regrets: &[f64], out: &mut [f64]) -> Result<NormalHedgeState, NumericError> {
    assert!(!regrets.is_empty(), "NormalHedge needs at least one action");
    let state = nh_scale(regrets)?;
    if state.scale == 0.0 {
        out.fill(1.0 / out.len() as f64);
        return Ok(state);
    }
    let mut total = 0.0;
    for (o, &r) in out.iter_mut().zip(regrets) {
        let r = r.max(0.0);
        *o = if r > 0.0 { (r / state.scale) * (r * r / (2.0 * state.scale)).exp() } else { 0.0 };
        total += *o;
    }
    out.iter_mut().for_each(|o| *o /= total);
    Ok(state)
}

/// Which per-infoset regret minimizer turns regrets into strategies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Minimizer {
    /// Plain regret matching.
    RegretMatching,
    /// Regret matching over regrets floored at zero after every update.
    RegretMatchingPlus,
    NormalHedge,
}

impl Minimizer {
    pub fn strategy(self, regrets: &[f64], out: &mut [f64]) -> Result<(), NumericError> {
        match self {
            Minimizer::RegretMatching | Minimizer::RegretMatchingPlus => {
                rm_strategy(regrets, out);
                Ok(())
            }
            Minimizer::NormalHedge => nh_strategy(regrets, out).map(|_| ()),
        }
    }

    /// Whether accumulated regrets are floored at zero on every update.
    pub fn floors_regret(self) -> bool {
        self == Minimizer::RegretMatchingPlus
    }

    pub fn name(self) -> &'static str {
        match self {
            Minimizer::RegretMatching => "rm",
            Minimizer::RegretMatchingPlus => "rm+",
            Minimizer::NormalHedge => "nh",
        }
    }
}

impl fmt::Display for Minimizer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.name())
    }
}

impl std::str::FromStr for Minimizer {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "rm" => Ok(Minimizer::RegretMatching),
            "rm+" => Ok(Minimizer::RegretMatchingPlus),
            "nh" => Ok(Minimizer::NormalHedge),
            other => Err(format!("unknown minimizer {other:?}; expected rm, rm+, nh or optimistic-rm")),
        }
    }
}

/// Per-iteration discount exponents.
///
/// On iteration `t` positive regrets are multiplied by `t^α/(t^α+1)`, negative
/// regrets by `t^β/(t^β+1)` and average-strategy contributions by
/// `(t/(t+1))^γ`. `α = +∞` leaves positive regrets alone, `β = -∞` zeroes
/// negative regrets and `β = +∞` leaves them alone.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiscountSchedule {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ScheduleError {
    #[error("alpha must be >= 0 or +inf, got {0}")]
    Alpha(f64),
    #[error("beta ({beta}) must not exceed alpha ({alpha})")]
    BetaAboveAlpha { alpha: f64, beta: f64 },
    #[error("gamma must be >= 0, got {0}")]
    Gamma(f64),
}

impl DiscountSchedule {
    /// Plain accumulation with uniform averaging.
    pub const NONE: DiscountSchedule =
        DiscountSchedule { alpha: f64::INFINITY, beta: f64::INFINITY, gamma: 0.0 };

    pub fn new(alpha: f64, beta: f64, gamma: f64) -> Result<Self, ScheduleError> {
        if alpha.is_nan() || alpha < 0.0 {
            return Err(ScheduleError::Alpha(alpha));
        }
        if beta.is_nan() || beta > alpha {
            return Err(ScheduleError::BetaAboveAlpha { alpha, beta });
        }
        if gamma.is_nan() || gamma < 0.0 || gamma.is_infinite() {
            return Err(ScheduleError::Gamma(gamma));
        }
        Ok(Self { alpha, beta, gamma })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Multipliers {
    pub positive: f64,
    pub negative: f64,
    pub average: f64,
}

fn power_ratio(t: f64, exponent: f64) -> f64 {
    if exponent == f64::INFINITY {
        1.0
    } else if exponent == f64::NEG_INFINITY {
        0.0
    } else {
        // t^e / (t^e + 1) without overflowing t^e.
        1.0 / (1.0 + t.powf(-exponent))
    }
}

/// Multipliers applied at the end of iteration `t >= 1`.
pub fn discount_multipliers(t: u64, schedule: &DiscountSchedule) -> Multipliers {
    assert!(t >= 1, "iterations are numbered from 1");
    let t = t as f64;
    Multipliers {
        positive: power_ratio(t, schedule.alpha),
        negative: power_ratio(t, schedule.beta),
        average: (t / (t + 1.0)).powf(schedule.gamma),
    }
}
