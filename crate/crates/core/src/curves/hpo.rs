//! Toy hyperparameter-optimization process.
//!
//! An [`HpoArm`] tunes a point in a small box against a synthetic loss and
//! reports `1 − (best loss − global min) / (first loss − global min)` after
//! every trial, which gives the rising-then-saturating reward shape of a real
//! tuning run without training anything.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{Error, Result};
use crate::seed::SeedPath;

pub const MIN_DIMENSION: usize = 2;
pub const MAX_DIMENSION: usize = 5;

/// Candidates drawn per density-estimator step.
const CANDIDATES: usize = 24;

/// Share of trials, best first, that the good density is fitted to.
const GOOD_FRACTION: f64 = 0.25;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Objective {
    /// `Σ x_i²` on `[-5, 5]^d`.
    Sphere,
    /// `Σ 100 (x_{i+1} − x_i²)² + (1 − x_i)²` on `[-2, 2]^d`.
    Rosenbrock,
    /// `Σ w_i (x_i − o_i)²` with a seeded optimum `o` and weights `w`.
    Quadratic,
}

impl Objective {
    fn bounds(self) -> (f64, f64) {
        match self {
            Objective::Sphere | Objective::Quadratic => (-5.0, 5.0),
            Objective::Rosenbrock => (-2.0, 2.0),
        }
    }
}

impl FromStr for Objective {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sphere" => Ok(Objective::Sphere),
            "rosenbrock" => Ok(Objective::Rosenbrock),
            "quadratic" => Ok(Objective::Quadratic),
            other => Err(Error::Config(format!(
                "unknown objective `{other}` (expected sphere, rosenbrock or quadratic)"
            ))),
        }
    }
}

impl fmt::Display for Objective {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Objective::Sphere => "sphere",
            Objective::Rosenbrock => "rosenbrock",
            Objective::Quadratic => "quadratic",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchStrategy {
    Random,
    /// Good/bad split at the lower loss quartile with axis-aligned Gaussian kernels;
    /// the candidate with the largest good/bad density ratio is evaluated.
    DensityEstimator,
}

impl FromStr for SearchStrategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "random" => Ok(SearchStrategy::Random),
            "density_estimator" | "density" => Ok(SearchStrategy::DensityEstimator),
            other => Err(Error::Config(format!(
                "unknown search strategy `{other}` (expected random or density_estimator)"
            ))),
        }
    }
}

impl fmt::Display for SearchStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SearchStrategy::Random => "random",
            SearchStrategy::DensityEstimator => "density_estimator",
        })
    }
}

#[derive(Debug, Clone)]
struct Landscape {
    objective: Objective,
    lower: f64,
    upper: f64,
    optimum: Vec<f64>,
    weights: Vec<f64>,
}

impl Landscape {
    fn new(objective: Objective, dim: usize, rng: &mut ChaCha8Rng) -> Self {
        let (lower, upper) = objective.bounds();
        let (optimum, weights) = match objective {
            Objective::Quadratic => (
                (0..dim).map(|_| rng.random_range(-4.0..4.0)).collect(),
                (0..dim).map(|_| rng.random_range(0.5..2.0)).collect(),
            ),
            _ => (vec![0.0; dim], vec![1.0; dim]),
        };
        Landscape { objective, lower, upper, optimum, weights }
    }

    /// Every objective has global minimum 0.
    fn loss(&self, x: &[f64]) -> f64 {
        match self.objective {
            Objective::Sphere => x.iter().map(|v| v * v).sum(),
            Objective::Rosenbrock => x
                .windows(2)
                .map(|w| 100.0 * (w[1] - w[0] * w[0]).powi(2) + (1.0 - w[0]).powi(2))
                .sum(),
            Objective::Quadratic => x
                .iter()
                .zip(&self.optimum)
                .zip(&self.weights)
                .map(|((v, o), w)| w * (v - o).powi(2))
                .sum(),
        }
    }
}

#[derive(Debug, Clone)]
struct Trial {
    point: Vec<f64>,
    loss: f64,
}

/// One arm of the toy CASH problem: an HPO process over a synthetic objective.
#[derive(Debug, Clone)]
pub struct HpoArm {
    landscape: Landscape,
    strategy: SearchStrategy,
    trials: Vec<Trial>,
    best_loss: f64,
    initial_loss: f64,
    cost_mean: f64,
    pending_cost: f64,
    search_rng: ChaCha8Rng,
    cost_rng: ChaCha8Rng,
}

impl HpoArm {
    pub fn new(
        objective: Objective,
        dimension: usize,
        strategy: SearchStrategy,
        cost_mean: f64,
        seed: u64,
    ) -> Result<Self> {
        if !(MIN_DIMENSION..=MAX_DIMENSION).contains(&dimension) {
            return Err(Error::Config(format!(
                "hpo dimension must be in [{MIN_DIMENSION}, {MAX_DIMENSION}], got {dimension}"
            )));
        }
        if !(cost_mean > 0.0 && cost_mean.is_finite()) {
            return Err(Error::Config(format!("hpo cost must be positive, got {cost_mean}")));
        }
        let root = SeedPath::root(seed);
        let mut landscape_rng = root.child(0).rng();
        let mut cost_rng = root.child(2).rng();
        let pending_cost = draw_cost(cost_mean, &mut cost_rng);
        Ok(HpoArm {
            landscape: Landscape::new(objective, dimension, &mut landscape_rng),
            strategy,
            trials: Vec::new(),
            best_loss: f64::INFINITY,
            initial_loss: f64::NAN,
            cost_mean,
            pending_cost,
            search_rng: root.child(1).rng(),
            cost_rng,
        })
    }

    pub fn objective(&self) -> Objective {
        self.landscape.objective
    }

    pub fn dimension(&self) -> usize {
        self.landscape.optimum.len()
    }

    pub fn strategy(&self) -> SearchStrategy {
        self.strategy
    }

    pub fn cost_mean(&self) -> f64 {
        self.cost_mean
    }

    pub fn best_loss(&self) -> f64 {
        self.best_loss
    }

    pub fn trials(&self) -> usize {
        self.trials.len()
    }

    pub(crate) fn peek_cost(&self) -> f64 {
        self.pending_cost
    }

    /// Runs one trial; returns `(reward, cost)`.
    pub(crate) fn step(&mut self) -> (f64, f64) {
        let point = match self.strategy {
            SearchStrategy::Random => self.random_point(),
            SearchStrategy::DensityEstimator => self.suggest(),
        };
        let loss = self.landscape.loss(&point);
        if self.trials.is_empty() {
            self.initial_loss = loss;
        }
        self.best_loss = self.best_loss.min(loss);
        self.trials.push(Trial { point, loss });

        let cost = self.pending_cost;
        self.pending_cost = draw_cost(self.cost_mean, &mut self.cost_rng);
        (self.reward(), cost)
    }

    fn reward(&self) -> f64 {
        // global minimum is 0 for every objective
        if self.initial_loss <= 0.0 {
            return 1.0;
        }
        (1.0 - self.best_loss / self.initial_loss).clamp(0.0, 1.0)
    }

    fn random_point(&mut self) -> Vec<f64> {
        let (lo, hi) = (self.landscape.lower, self.landscape.upper);
        (0..self.dimension()).map(|_| self.search_rng.random_range(lo..hi)).collect()
    }

    fn suggest(&mut self) -> Vec<f64> {
        let dim = self.dimension();
        let startup = (2 * dim).max(5);
        if self.trials.len() < startup {
            return self.random_point();
        }

        let mut order: Vec<&Trial> = self.trials.iter().collect();
        order.sort_by(|a, b| a.loss.total_cmp(&b.loss));
        let n_good = ((order.len() as f64 * GOOD_FRACTION).ceil() as usize).max(2);
        let (good, bad) = order.split_at(n_good);
        let (lo, hi) = (self.landscape.lower, self.landscape.upper);
        let good = Kde::fit(good, lo, hi);
        let bad = Kde::fit(bad, lo, hi);

        let mut best: Option<(f64, Vec<f64>)> = None;
        for _ in 0..CANDIDATES {
            let candidate = good.sample(&mut self.search_rng, lo, hi);
            let score = good.log_density(&candidate) - bad.log_density(&candidate);
            if best.as_ref().is_none_or(|(s, _)| score > *s) {
                best = Some((score, candidate));
            }
        }
        best.expect("CANDIDATES > 0").1
    }
}

fn draw_cost(mean: f64, rng: &mut ChaCha8Rng) -> f64 {
    mean * rng.random_range(0.8..1.2)
}

/// Axis-aligned Gaussian product-kernel density estimate.
struct Kde {
    centers: Vec<Vec<f64>>,
    bandwidth: Vec<f64>,
}

impl Kde {
    fn fit(trials: &[&Trial], lo: f64, hi: f64) -> Self {
        let n = trials.len() as f64;
        let dim = trials[0].point.len();
        let floor = 0.1 * (hi - lo);
        let shrink = n.powf(-1.0 / (dim as f64 + 4.0));
        let bandwidth = (0..dim)
            .map(|d| {
                let mean = trials.iter().map(|t| t.point[d]).sum::<f64>() / n;
                let var = trials.iter().map(|t| (t.point[d] - mean).powi(2)).sum::<f64>() / n;
                (var.sqrt() * shrink).max(floor)
            })
            .collect();
        Kde { centers: trials.iter().map(|t| t.point.clone()).collect(), bandwidth }
    }

    fn sample(&self, rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> Vec<f64> {
        let center = &self.centers[rng.random_range(0..self.centers.len())];
        center
            .iter()
            .zip(&self.bandwidth)
            .map(|(&c, &h)| {
                let noise = Normal::new(0.0, h).expect("bandwidth is positive").sample(rng);
                (c + noise).clamp(lo, hi)
            })
            .collect()
    }

    fn log_density(&self, x: &[f64]) -> f64 {
        let norm: f64 = self
            .bandwidth
            .iter()
            .map(|h| -(h * (2.0 * std::f64::consts::PI).sqrt()).ln())
            .sum();
        let terms: Vec<f64> = self
            .centers
            .iter()
            .map(|c| {
                let quad: f64 = x
                    .iter()
                    .zip(c)
                    .zip(&self.bandwidth)
                    .map(|((xi, ci), h)| ((xi - ci) / h).powi(2))
                    .sum();
                norm - 0.5 * quad
            })
            .collect();
        let max = terms.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let sum: f64 = terms.iter().map(|t| (t - max).exp()).sum();
        max + sum.ln() - (self.centers.len() as f64).ln()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(arm: &mut HpoArm, n: usize) -> Vec<f64> {
        (0..n).map(|_| arm.step().0).collect()
    }

    #[test]
    fn first_trial_scores_zero_and_rewards_rise() {
        for objective in [Objective::Sphere, Objective::Rosenbrock, Objective::Quadratic] {
            for strategy in [SearchStrategy::Random, SearchStrategy::DensityEstimator] {
                let mut finals = 0.0;
                for seed in 0..10 {
                    let mut arm = HpoArm::new(objective, 3, strategy, 1.0, seed).unwrap();
                    let rewards = run(&mut arm, 60);
                    assert_eq!(rewards[0], 0.0);
                    assert!(rewards.windows(2).all(|w| w[1] >= w[0]));
                    assert!(rewards.iter().all(|r| (0.0..=1.0).contains(r)));
                    finals += rewards[59];
                }
                // a lucky first trial can leave one run flat, not the average
                assert!(finals / 10.0 > 0.5, "{objective} {strategy}: {}", finals / 10.0);
            }
        }
    }

    #[test]
    fn costs_stay_within_twenty_percent_of_mean() {
        let mut arm = HpoArm::new(Objective::Sphere, 2, SearchStrategy::Random, 3.0, 1).unwrap();
        for _ in 0..200 {
            let (_, cost) = arm.step();
            assert!((2.4..3.6).contains(&cost));
        }
    }

    #[test]
    fn density_estimator_beats_random_on_sphere_on_average() {
        let mut tpe_total = 0.0;
        let mut rnd_total = 0.0;
        for seed in 0..20 {
            let mut a = HpoArm::new(Objective::Sphere, 4, SearchStrategy::DensityEstimator, 1.0, seed).unwrap();
            let mut b = HpoArm::new(Objective::Sphere, 4, SearchStrategy::Random, 1.0, seed).unwrap();
            tpe_total += *run(&mut a, 80).last().unwrap();
            rnd_total += *run(&mut b, 80).last().unwrap();
        }
        assert!(tpe_total > rnd_total, "tpe {tpe_total} vs random {rnd_total}");
    }

    #[test]
    fn rejects_bad_dimension_and_cost() {
        assert!(HpoArm::new(Objective::Sphere, 1, SearchStrategy::Random, 1.0, 0).is_err());
        assert!(HpoArm::new(Objective::Sphere, 6, SearchStrategy::Random, 1.0, 0).is_err());
        assert!(HpoArm::new(Objective::Sphere, 2, SearchStrategy::Random, 0.0, 0).is_err());
    }
}
