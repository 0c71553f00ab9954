//! Problem-dependent quantities from the regret analysis, computed from
//! ground truth.

use serde::Serialize;

use super::GroundTruth;
use crate::error::{Error, Result};

/// Values below this are treated as zero bias.
pub const BIAS_TOLERANCE: f64 = 1e-12;

/// `γ(T)` and its per-arm components.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Gamma {
    pub gamma: u64,
    pub per_arm: Vec<u64>,
    pub optimal_arm: usize,
    /// False when some suboptimal arm was never separated before `T`.
    pub identifiable: bool,
}

impl GroundTruth {
    /// `γ_k(T)`: pull `k` and the optimal arm alternately (lower index
    /// first, global step counting both) and return the per-arm pull count
    /// after which `k`'s upper bound, from the last increment of its true
    /// rewards, is at or below the optimal arm's lower bound, with pulls left
    /// to spend. Arms that never separate before `T` get `T`; the optimal arm
    /// gets 0.
    pub fn gamma(&self) -> Gamma {
        let (star, _) = self.optimal();
        let horizon = self.horizon();
        let separations: Vec<Option<u64>> = (0..self.arms())
            .map(|k| if k == star { Some(0) } else { self.lockstep_separation(k, star) })
            .collect();
        let identifiable = separations.iter().all(Option::is_some);
        let per_arm: Vec<u64> = separations.iter().map(|s| s.unwrap_or(horizon)).collect();
        Gamma { gamma: per_arm.iter().copied().max().unwrap_or(0), per_arm, optimal_arm: star, identifiable }
    }

    fn lockstep_separation(&self, k: usize, star: usize) -> Option<u64> {
        let horizon = self.horizon();
        let k_first = k < star;
        let mut step = 0;
        for n in 1.. {
            if step + 2 > horizon {
                return None;
            }
            step += 2;
            let k_step = if k_first { step - 1 } else { step };
            let upper = match n {
                1 => 1.0,
                _ => {
                    let rate = self.value(k, n) - self.value(k, n - 1);
                    (self.value(k, n) + rate * (horizon - k_step) as f64).min(1.0)
                }
            };
            // no sweep follows the final step
            if step < horizon && upper <= self.value(star, n) {
                return Some(n);
            }
        }
        unreachable!()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Theorem1Bound {
    pub bound: f64,
    /// `(K − 1)·γ(T) ≥ T`; the bound is then reported as the maximum regret 1.
    pub vacuous: bool,
}

/// `r_{k*}(T) − r_{k*}(T − (K − 1)·γ(T))`, reading the arm-count symbol in the
/// bound as the number of arms `K`.
pub fn theorem1_bound(truth: &GroundTruth, gamma: u64) -> Theorem1Bound {
    let horizon = truth.horizon();
    let spent = (truth.arms() as u64 - 1).saturating_mul(gamma);
    if spent >= horizon {
        return Theorem1Bound { bound: 1.0, vacuous: true };
    }
    let (star, best) = truth.optimal();
    Theorem1Bound { bound: best - truth.value(star, horizon - spent), vacuous: false }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Corollary1Check {
    /// `γ(T) ≤ (K·T − T) / (K·(K − 1))`.
    pub condition_holds: bool,
    /// `r_{k*}(T) − max_k r_k(⌊T/K⌋)`; an arm with zero pulls contributes 0.
    pub average_regret: f64,
    /// False when `T` is not a multiple of `K` and `⌊T/K⌋` was used.
    pub exact_split: bool,
}

pub fn corollary1_check(truth: &GroundTruth, gamma: u64) -> Corollary1Check {
    let k = truth.arms() as u64;
    let horizon = truth.horizon();
    if k == 1 {
        return Corollary1Check { condition_holds: true, average_regret: 0.0, exact_split: true };
    }
    // integer form of γ·K·(K−1) ≤ (K−1)·T
    let condition_holds = u128::from(gamma) * u128::from(k) <= u128::from(horizon);
    let share = horizon / k;
    let (_, best) = truth.optimal();
    let uniform = (0..truth.arms())
        .map(|a| if share == 0 { 0.0 } else { truth.value(a, share) })
        .fold(0.0, f64::max);
    Corollary1Check { condition_holds, average_regret: best - uniform, exact_split: horizon.is_multiple_of(k) }
}

/// Least concave majorant of `(n, values[n−1])` for `n = 1..=len`, evaluated
/// at the same points.
///
/// Adding the sequence's limit as a point at infinity does not change the
/// majorant on the observed range: the closing segment toward it has slope
/// tending to zero, which a non-decreasing sequence's hull already ends with.
pub fn concave_majorant(values: &[f64]) -> Vec<f64> {
    let mut hull: Vec<(f64, f64)> = Vec::with_capacity(values.len());
    for (i, &v) in values.iter().enumerate() {
        let p = ((i + 1) as f64, v);
        while hull.len() >= 2 {
            let (a, b) = (hull[hull.len() - 2], hull[hull.len() - 1]);
            // drop b if it lies on or below the chord a → p
            if (b.1 - a.1) * (p.0 - a.0) <= (p.1 - a.1) * (b.0 - a.0) {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }
    let mut out = Vec::with_capacity(values.len());
    let mut seg = 0;
    for (i, &v) in values.iter().enumerate() {
        let x = (i + 1) as f64;
        while seg + 1 < hull.len() && hull[seg + 1].0 < x {
            seg += 1;
        }
        let value = if seg + 1 < hull.len() {
            let (a, b) = (hull[seg], hull[seg + 1]);
            a.1 + (b.1 - a.1) * (x - a.0) / (b.0 - a.0)
        } else {
            hull[seg].1
        };
        out.push(value.max(v));
    }
    out
}

/// Whether `Δ(t) / Δ(t − C) ≤ (T − t) / (T − t + C)` holds for every
/// `t ∈ (C, T]`, where `Δ = majorant − observed` (indices are 1-based pull
/// counts). A zero `Δ(t − C)` is satisfied only by a zero `Δ(t)`.
pub fn theorem2_condition_check(
    majorant: &[f64],
    observed: &[f64],
    window: usize,
    horizon: u64,
) -> Result<bool> {
    let horizon_len = usize::try_from(horizon).map_err(|_| Error::Domain("horizon too large".into()))?;
    if window == 0 {
        return Err(Error::Domain("window must be at least 1".into()));
    }
    if majorant.len() < horizon_len || observed.len() < horizon_len {
        return Err(Error::Domain(format!(
            "need {horizon_len} values, got majorant {} and observed {}",
            majorant.len(),
            observed.len()
        )));
    }
    let mut bias = Vec::with_capacity(horizon_len);
    for t in 0..horizon_len {
        let d = majorant[t] - observed[t];
        if d < -BIAS_TOLERANCE {
            return Err(Error::InvalidMajorant { t: t + 1, observed: observed[t], majorant: majorant[t] });
        }
        bias.push(if d <= BIAS_TOLERANCE { 0.0 } else { d });
    }
    Ok(((window + 1)..=horizon_len).all(|t| {
        let now = bias[t - 1];
        let before = bias[t - 1 - window];
        if before == 0.0 {
            return now == 0.0;
        }
        let remaining = (horizon_len - t) as f64;
        now * (remaining + window as f64) <= before * remaining + BIAS_TOLERANCE
    }))
}

/// [`theorem2_condition_check`] against the least concave majorant of `observed`.
pub fn theorem2_condition_holds(observed: &[f64], window: usize, horizon: u64) -> Result<bool> {
    let len = usize::try_from(horizon).map_err(|_| Error::Domain("horizon too large".into()))?;
    let prefix = &observed[..len.min(observed.len())];
    theorem2_condition_check(&concave_majorant(prefix), prefix, window, horizon)
}
