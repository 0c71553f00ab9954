use super::state::{ArmState, CandidateSet};
use super::GrowthMode;
use crate::error::{Error, Result};

/// Growth rate of an observed reward history.
///
/// `Last` is the latest increment. `Smooth(C)` averages the latest `C`
/// increments, `(y(n) − y(n−C)) / C`, and falls back to the average of all
/// increments so far while `n ≤ C`.
pub fn growth_rate(history: &[f64], mode: GrowthMode) -> Result<f64> {
    let n = history.len();
    if n < 2 {
        return Err(Error::InsufficientObservations { needed: 2, have: n });
    }
    let rate = match mode {
        GrowthMode::Last => history[n - 1] - history[n - 2],
        GrowthMode::Smooth(window) if n > window => {
            (history[n - 1] - history[n - 1 - window]) / window as f64
        }
        GrowthMode::Smooth(_) => (history[n - 1] - history[0]) / (n - 1) as f64,
    };
    Ok(rate.max(0.0))
}

/// `min(y + ω·(T − t), 1)`, or 1 when the growth rate is unknown.
pub fn upper_bound(state: &ArmState, step: u64, horizon: u64, growth: Option<f64>) -> Result<f64> {
    if step > horizon {
        return Err(Error::Domain(format!("step {step} is past the horizon {horizon}")));
    }
    let last = state
        .last()
        .ok_or(Error::InsufficientObservations { needed: 1, have: 0 })?;
    Ok(match growth {
        Some(rate) => (last + rate * (horizon - step) as f64).min(1.0),
        None => 1.0,
    })
}

/// `min(y + ω·B′/c, 1)` with `c` the arm's mean pull cost and `B′` the budget
/// left, or 1 when the growth rate is unknown.
pub fn cost_aware_upper_bound(state: &ArmState, budget_left: f64, growth: Option<f64>) -> Result<f64> {
    let last = state
        .last()
        .ok_or(Error::InsufficientObservations { needed: 1, have: 0 })?;
    let mean_cost = state.mean_cost().unwrap_or(0.0);
    if mean_cost <= 0.0 {
        return Err(Error::Domain(format!("mean pull cost must be positive, got {mean_cost}")));
    }
    if budget_left < 0.0 {
        return Err(Error::Domain(format!("budget left must be non-negative, got {budget_left}")));
    }
    Ok(match growth {
        Some(rate) => (last + rate * budget_left / mean_cost).min(1.0),
        None => 1.0,
    })
}

/// One elimination sweep.
///
/// Arm `j` is removed iff another candidate `i` has `lower_i ≥ upper_j − ε`.
/// Every comparison uses the set as it stood before the sweep. If the sweep
/// would remove everything, the lowest id is kept.
///
/// `states` is indexed by arm id.
pub fn eliminate(candidates: &CandidateSet, states: &[ArmState], epsilon: f64) -> CandidateSet {
    let ids = candidates.ids();
    let survivors: Vec<usize> = ids
        .iter()
        .copied()
        .filter(|&j| {
            !ids.iter()
                .any(|&i| i != j && states[i].lower >= states[j].upper - epsilon)
        })
        .collect();
    CandidateSet::from_ids(survivors).unwrap_or_else(|| {
        CandidateSet::from_ids(vec![ids[0]]).expect("non-empty")
    })
}
