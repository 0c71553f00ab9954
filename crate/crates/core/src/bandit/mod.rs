//! The rising-bandit elimination algorithm.
//!
//! Each round pulls every candidate arm once in ascending id order. After a
//! pull the arm's lower bound becomes its latest reward and its upper bound
//! becomes a linear extrapolation of the growth rate to the end of the
//! horizon (or of the budget, in cost-aware mode), capped at 1. After the
//! round, any arm whose upper bound is reached by another candidate's lower
//! bound is dropped. Once one arm remains it receives every remaining pull.
//!
//! Under bounded, increasing, concave rewards the extrapolation can only
//! overestimate, so a dropped arm could not have beaten the arm that dropped
//! it within the remaining resource.

mod bounds;
mod state;

pub use bounds::{cost_aware_upper_bound, eliminate, growth_rate, upper_bound};
pub use state::{ArmState, CandidateSet};

use crate::curves::{ArmProcess, RewardCurve};
use crate::error::{Error, Result};
use crate::trace::{PolicyTrace, TraceRecorder};

/// Window of the smooth growth rate used unless configured otherwise.
pub const DEFAULT_SMOOTH_WINDOW: usize = 7;

/// Absolute tolerance for bound comparisons.
pub const DEFAULT_EPSILON: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Horizon {
    /// A fixed number of pulls `T`.
    Trials(u64),
    /// A total cost `B`; a pull that would overshoot it is not taken.
    Budget(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GrowthMode {
    Last,
    Smooth(usize),
}

impl GrowthMode {
    pub fn smooth() -> Self {
        GrowthMode::Smooth(DEFAULT_SMOOTH_WINDOW)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BanditConfig {
    pub horizon: Horizon,
    pub growth: GrowthMode,
    pub epsilon: f64,
}

impl BanditConfig {
    pub fn trials(horizon: u64) -> Self {
        BanditConfig { horizon: Horizon::Trials(horizon), growth: GrowthMode::Last, epsilon: DEFAULT_EPSILON }
    }

    pub fn budget(budget: f64) -> Self {
        BanditConfig { horizon: Horizon::Budget(budget), growth: GrowthMode::Last, epsilon: DEFAULT_EPSILON }
    }

    pub fn with_growth(mut self, growth: GrowthMode) -> Self {
        self.growth = growth;
        self
    }

    pub fn with_epsilon(mut self, epsilon: f64) -> Self {
        self.epsilon = epsilon;
        self
    }

    pub fn validate(&self) -> Result<()> {
        match self.horizon {
            Horizon::Trials(0) => return Err(Error::Config("horizon must be at least 1 trial".into())),
            Horizon::Budget(b) if !(b > 0.0 && b.is_finite()) => {
                return Err(Error::Config(format!("budget must be positive and finite, got {b}")))
            }
            _ => {}
        }
        if self.growth == GrowthMode::Smooth(0) {
            return Err(Error::Config("smooth growth window must be at least 1".into()));
        }
        if !(self.epsilon >= 0.0 && self.epsilon.is_finite()) {
            return Err(Error::Config(format!("epsilon must be non-negative, got {}", self.epsilon)));
        }
        Ok(())
    }
}

/// Runs the elimination algorithm on `arms`, which are pulled in place.
pub fn rising_bandit_run(arms: &mut [ArmProcess], config: &BanditConfig) -> Result<PolicyTrace> {
    run_named("rising_bandit", arms, config)
}

pub(crate) fn run_named(
    name: &str,
    arms: &mut [ArmProcess],
    config: &BanditConfig,
) -> Result<PolicyTrace> {
    config.validate()?;
    if arms.is_empty() {
        return Err(Error::Config("instance needs at least one arm".into()));
    }
    let mut states: Vec<ArmState> = (0..arms.len()).map(ArmState::new).collect();
    let mut candidates = CandidateSet::full(arms.len());
    let mut trace = TraceRecorder::new(name, arms.len());
    let mut step: u64 = 0;
    let mut spent = 0.0;

    'rounds: loop {
        for &k in candidates.ids() {
            match config.horizon {
                Horizon::Trials(total) if step >= total => break 'rounds,
                Horizon::Budget(budget) if spent + arms[k].peek_cost() > budget => break 'rounds,
                _ => {}
            }
            step += 1;
            let pull = arms[k].pull();
            spent += pull.cost;
            trace.record(k, pull, candidates.len());

            let state = &mut states[k];
            state.observe(pull);
            state.growth_rate = growth_rate(state.history(), config.growth).ok();
            // a smoothed rate only bounds anything once a full window is seen
            let rate = match config.growth {
                GrowthMode::Smooth(window) if state.history().len() <= window => None,
                _ => state.growth_rate,
            };
            state.upper = match config.horizon {
                Horizon::Trials(total) => upper_bound(state, step, total, rate)?,
                Horizon::Budget(budget) => cost_aware_upper_bound(state, (budget - spent).max(0.0), rate)?,
            };
        }
        if let Horizon::Trials(total) = config.horizon {
            if step >= total {
                break;
            }
        }

        let next = eliminate(&candidates, &states, config.epsilon);
        for &k in candidates.ids() {
            if !next.contains(k) {
                states[k].active = false;
                trace.eliminated(k);
            }
        }
        candidates = next;
    }

    Ok(trace.finish(candidates.ids().to_vec()))
}

/// The offline optimum: the arm with the largest `r_k(T)` (lowest index on
/// ties) and that value.
pub fn offline_max_run(curves: &[RewardCurve], horizon: u64) -> Result<(usize, f64)> {
    if curves.is_empty() {
        return Err(Error::Config("need at least one curve".into()));
    }
    let mut best = (0, curves[0].eval(horizon)?);
    for (k, curve) in curves.iter().enumerate().skip(1) {
        let value = curve.eval(horizon)?;
        if value > best.1 {
            best = (k, value);
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn exp(limit: f64, initial: f64, decay: f64) -> RewardCurve {
        RewardCurve::exponential(limit, initial, decay).unwrap()
    }

    fn arms(curves: &[RewardCurve]) -> Vec<ArmProcess> {
        curves.iter().cloned().map(ArmProcess::curve).collect()
    }

    #[test]
    fn single_arm_gets_every_pull() {
        let c = exp(0.9, 0.5, 0.5);
        let trace = rising_bandit_run(&mut arms(std::slice::from_ref(&c)), &BanditConfig::trials(10)).unwrap();
        assert_eq!(trace.pull_counts, vec![10]);
        assert_eq!(trace.final_j, c.eval(10).unwrap());
    }

    #[test]
    fn two_arm_example_follows_the_round_robin_schedule() {
        // Hand trace: t=1,2 pull both (upper = 1); t=3 arm 0 gets 0.7 with
        // growth 0.2, t=4 arm 1 gets 0.43 with upper 0.43 + 0.13 = 0.56 ≤ 0.7,
        // so arm 1 is dropped and t=5 is arm 0's third pull.
        let curves = [exp(0.9, 0.5, 0.5), exp(0.95, 0.3, 0.8)];
        let trace = rising_bandit_run(&mut arms(&curves), &BanditConfig::trials(5)).unwrap();
        assert_eq!(trace.best_arm, Some(0));
        assert_eq!(trace.pull_counts, vec![3, 2]);
        assert!((trace.final_j - 0.8).abs() < 1e-15);
        assert_eq!(trace.eliminations.len(), 1);
        assert_eq!((trace.eliminations[0].step, trace.eliminations[0].arm), (4, 1));
        assert_eq!(trace.final_candidates, vec![0]);
    }

    #[test]
    fn identical_arms_share_the_horizon() {
        let c = exp(0.9, 0.5, 0.5);
        let trace = rising_bandit_run(&mut arms(&[c.clone(), c.clone()]), &BanditConfig::trials(6)).unwrap();
        assert_eq!(trace.pull_counts, vec![3, 3]);
        assert!(trace.eliminations.is_empty());
        assert_eq!(trace.final_j, c.eval(3).unwrap());
    }

    #[test]
    fn mid_round_truncation_pulls_lower_ids_first() {
        let curves = [exp(0.9, 0.5, 0.5), exp(0.9, 0.5, 0.5), exp(0.9, 0.5, 0.5)];
        let trace = rising_bandit_run(&mut arms(&curves), &BanditConfig::trials(7)).unwrap();
        assert_eq!(trace.pull_counts, vec![3, 2, 2]);
    }

    #[test]
    fn budget_mode_never_overshoots() {
        let curves = [exp(0.9, 0.5, 0.5), exp(0.8, 0.3, 0.7)];
        let mut a: Vec<ArmProcess> = curves
            .iter()
            .zip([3.0, 1.0])
            .map(|(c, cost)| crate::curves::CurveArm::new(c.clone(), cost).unwrap().into())
            .collect();
        let trace = rising_bandit_run(&mut a, &BanditConfig::budget(20.5)).unwrap();
        assert!(trace.total_cost <= 20.5);
        assert!(trace.total_cost + 3.0 > 20.5 || trace.total_cost + 1.0 > 20.5);
    }

    #[test]
    fn budget_below_first_cost_pulls_nothing() {
        let mut a: Vec<ArmProcess> =
            vec![crate::curves::CurveArm::new(exp(0.9, 0.5, 0.5), 5.0).unwrap().into()];
        let trace = rising_bandit_run(&mut a, &BanditConfig::budget(4.0)).unwrap();
        assert!(trace.steps.is_empty());
        assert_eq!(trace.final_j, 0.0);
        assert_eq!(trace.best_arm, None);
    }

    #[test]
    fn offline_max_examples() {
        let curves = [exp(0.9, 0.5, 0.5), exp(0.95, 0.3, 0.8)];
        let (arm, j) = offline_max_run(&curves, 5).unwrap();
        assert_eq!(arm, 0);
        assert!((j - 0.875).abs() < 1e-15);
        let c = exp(0.9, 0.5, 0.5);
        assert_eq!(offline_max_run(&[c.clone(), c.clone()], 9).unwrap(), (0, c.eval(9).unwrap()));
        assert_eq!(offline_max_run(std::slice::from_ref(&c), 4).unwrap(), (0, c.eval(4).unwrap()));
    }

    #[test]
    fn invalid_configs_are_rejected() {
        let mut a = arms(&[exp(0.9, 0.5, 0.5)]);
        assert!(rising_bandit_run(&mut a, &BanditConfig::trials(0)).is_err());
        assert!(rising_bandit_run(&mut a, &BanditConfig::budget(0.0)).is_err());
        let smooth0 = BanditConfig::trials(5).with_growth(GrowthMode::Smooth(0));
        assert!(rising_bandit_run(&mut a, &smooth0).is_err());
        assert!(rising_bandit_run(&mut [], &BanditConfig::trials(5)).is_err());
    }
}
