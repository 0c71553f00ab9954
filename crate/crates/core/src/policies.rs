//! Baseline arm-selection policies.
//!
//! Every baseline sees only the observed histories. Arm indices are 0-based,
//! steps are 1-based, and ties go to the lowest index.

use std::fmt;

use rand::Rng;
use rand_distr::{Beta, Distribution};

use crate::bandit::{ArmState, GrowthMode};

pub const DEFAULT_UCB_COEFFICIENT: f64 = std::f64::consts::SQRT_2;
pub const DEFAULT_SOFTMAX_TEMPERATURE: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Policy {
    /// Round-robin: step `t` pulls arm `(t − 1) mod K`.
    Average,
    Ucb { coefficient: f64 },
    Softmax { temperature: f64 },
    /// Beta posterior per arm with fractional pseudo-counts `S += r`, `F += 1 − r`.
    Thompson { prior_alpha: f64, prior_beta: f64 },
    /// The elimination algorithm; runs through [`crate::bandit`], not [`Policy::select`].
    RisingBandit { growth: GrowthMode },
}

impl Policy {
    pub fn ucb() -> Self {
        Policy::Ucb { coefficient: DEFAULT_UCB_COEFFICIENT }
    }

    pub fn softmax() -> Self {
        Policy::Softmax { temperature: DEFAULT_SOFTMAX_TEMPERATURE }
    }

    pub fn thompson() -> Self {
        Policy::Thompson { prior_alpha: 1.0, prior_beta: 1.0 }
    }

    pub fn rising_bandit() -> Self {
        Policy::RisingBandit { growth: GrowthMode::Last }
    }

    /// Short identifier used in traces and reports.
    pub fn name(&self) -> &'static str {
        match self {
            Policy::Average => "average",
            Policy::Ucb { .. } => "ucb",
            Policy::Softmax { .. } => "softmax",
            Policy::Thompson { .. } => "thompson",
            Policy::RisingBandit { growth: GrowthMode::Last } => "rising_bandit",
            Policy::RisingBandit { growth: GrowthMode::Smooth(_) } => "rising_bandit_smooth",
        }
    }

    /// Chooses the arm for step `step ≥ 1`. `states` is indexed by arm id.
    ///
    /// # Panics
    ///
    /// Panics on `Policy::RisingBandit`, whose decisions depend on its own
    /// candidate set rather than on the histories alone, and on an empty
    /// `states`.
    pub fn select<R: Rng + ?Sized>(&self, states: &[ArmState], step: u64, rng: &mut R) -> usize {
        assert!(!states.is_empty(), "no arms to select from");
        let k = states.len();
        match *self {
            Policy::Average => ((step - 1) % k as u64) as usize,
            Policy::Ucb { coefficient } => unpulled(states).unwrap_or_else(|| {
                let log_t = (step as f64).ln();
                argmax(states.iter().map(|s| {
                    s.mean_reward().unwrap_or(0.0) + coefficient * (log_t / s.pulls() as f64).sqrt()
                }))
            }),
            Policy::Softmax { temperature } => unpulled(states).unwrap_or_else(|| {
                let logits: Vec<f64> =
                    states.iter().map(|s| s.mean_reward().unwrap_or(0.0) / temperature).collect();
                let max = logits.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                let weights: Vec<f64> = logits.iter().map(|l| (l - max).exp()).collect();
                let total: f64 = weights.iter().sum();
                let mut u = rng.random::<f64>() * total;
                for (i, w) in weights.iter().enumerate() {
                    if u < *w {
                        return i;
                    }
                    u -= w;
                }
                k - 1
            }),
            Policy::Thompson { prior_alpha, prior_beta } => argmax(states.iter().map(|s| {
                let successes: f64 = s.history().iter().sum();
                let failures = s.pulls() as f64 - successes;
                Beta::new(prior_alpha + successes, prior_beta + failures)
                    .expect("positive shape parameters")
                    .sample(rng)
            })),
            Policy::RisingBandit { .. } => {
                panic!("the rising bandit is run through bandit::rising_bandit_run")
            }
        }
    }
}

impl fmt::Display for Policy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

fn unpulled(states: &[ArmState]) -> Option<usize> {
    states.iter().position(|s| s.pulls() == 0)
}

fn argmax(values: impl Iterator<Item = f64>) -> usize {
    let mut best = (0, f64::NEG_INFINITY);
    for (i, v) in values.enumerate() {
        if v > best.1 {
            best = (i, v);
        }
    }
    best.0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curves::Pull;
    use crate::seed::SeedPath;

    fn states(histories: &[&[f64]]) -> Vec<ArmState> {
        histories
            .iter()
            .enumerate()
            .map(|(i, h)| {
                let mut s = ArmState::new(i);
                for &reward in h.iter() {
                    s.observe(Pull { reward, cost: 1.0 });
                }
                s
            })
            .collect()
    }

    #[test]
    fn average_is_round_robin() {
        let s = states(&[&[], &[], &[]]);
        let mut rng = SeedPath::root(0).rng();
        let picks: Vec<usize> = (1..=6).map(|t| Policy::Average.select(&s, t, &mut rng)).collect();
        assert_eq!(picks, vec![0, 1, 2, 0, 1, 2]);
    }

    #[test]
    fn ucb_prefers_higher_mean_after_forced_pulls() {
        let mut rng = SeedPath::root(0).rng();
        let p = Policy::Ucb { coefficient: 1.0 };
        assert_eq!(p.select(&states(&[&[0.9], &[]]), 2, &mut rng), 1);
        assert_eq!(p.select(&states(&[&[0.9], &[0.1]]), 3, &mut rng), 0);
    }

    #[test]
    fn softmax_and_ucb_force_unpulled_arms() {
        let mut rng = SeedPath::root(0).rng();
        let s = states(&[&[1.0], &[1.0], &[]]);
        assert_eq!(Policy::softmax().select(&s, 3, &mut rng), 2);
        assert_eq!(Policy::ucb().select(&s, 3, &mut rng), 2);
    }

    #[test]
    fn softmax_high_temperature_is_near_uniform() {
        let s = states(&[&[0.9], &[0.1], &[0.5], &[0.0]]);
        let p = Policy::Softmax { temperature: 1e9 };
        let mut rng = SeedPath::root(1).rng();
        let mut counts = [0u32; 4];
        let draws = 10_000;
        for t in 0..draws {
            counts[p.select(&s, 5 + t, &mut rng)] += 1;
        }
        let expected = draws as f64 / 4.0;
        let chi2: f64 = counts.iter().map(|&c| (c as f64 - expected).powi(2) / expected).sum();
        // 3 degrees of freedom, 99.9% quantile
        assert!(chi2 < 16.27, "chi2 = {chi2}, counts = {counts:?}");
    }

    #[test]
    fn softmax_low_temperature_is_greedy() {
        let s = states(&[&[0.2], &[0.9], &[0.5]]);
        let mut rng = SeedPath::root(2).rng();
        let p = Policy::Softmax { temperature: 1e-3 };
        assert!((0..200).all(|t| p.select(&s, 4 + t, &mut rng) == 1));
    }

    #[test]
    fn thompson_favors_consistently_high_rewards() {
        let high = [0.95; 40];
        let low = [0.05; 40];
        let s = states(&[&low, &high]);
        let mut rng = SeedPath::root(3).rng();
        let wins = (0..500).filter(|t| Policy::thompson().select(&s, 81 + t, &mut rng) == 1).count();
        assert_eq!(wins, 500);
    }

    #[test]
    fn stochastic_policies_replay_under_fixed_seed() {
        let s = states(&[&[0.5, 0.6], &[0.55], &[0.4, 0.45, 0.5]]);
        for p in [Policy::softmax(), Policy::thompson()] {
            let a: Vec<usize> = {
                let mut rng = SeedPath::root(9).rng();
                (0..50).map(|t| p.select(&s, 7 + t, &mut rng)).collect()
            };
            let b: Vec<usize> = {
                let mut rng = SeedPath::root(9).rng();
                (0..50).map(|t| p.select(&s, 7 + t, &mut rng)).collect()
            };
            assert_eq!(a, b);
        }
    }
}
