use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::curve::RewardCurve;
use super::hpo::HpoArm;
use crate::error::{Error, Result};
use crate::seed::SeedPath;

/// Outcome of one pull: the arm's best-so-far reward and the resource spent.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pull {
    pub reward: f64,
    pub cost: f64,
}

/// Pulls a noise-free curve: the `n`-th pull returns `curve(n)`.
#[derive(Debug, Clone)]
pub struct CurveArm {
    curve: RewardCurve,
    cost: f64,
}

impl CurveArm {
    pub fn new(curve: RewardCurve, cost: f64) -> Result<Self> {
        check_cost(cost)?;
        Ok(CurveArm { curve, cost })
    }
}

/// The `n`-th pull returns `max(previous, clamp(curve(n) − U(0, noise)))`.
#[derive(Debug, Clone)]
pub struct NoisyCurveArm {
    curve: RewardCurve,
    noise: f64,
    cost: f64,
    last: f64,
    rng: ChaCha8Rng,
}

impl NoisyCurveArm {
    pub fn new(curve: RewardCurve, noise: f64, cost: f64, seed: u64) -> Result<Self> {
        check_cost(cost)?;
        if !(0.0..=1.0).contains(&noise) {
            return Err(Error::Config(format!("noise amplitude must be in [0, 1], got {noise}")));
        }
        Ok(NoisyCurveArm { curve, noise, cost, last: 0.0, rng: SeedPath::root(seed).rng() })
    }

    pub fn noise(&self) -> f64 {
        self.noise
    }
}

fn check_cost(cost: f64) -> Result<()> {
    if cost > 0.0 && cost.is_finite() {
        Ok(())
    } else {
        Err(Error::Config(format!("per-pull cost must be positive, got {cost}")))
    }
}

// few arms per instance, so the size gap is not worth a box
#[allow(clippy::large_enum_variant)]
#[derive(Debug, Clone)]
enum Source {
    Curve(CurveArm),
    Noisy(NoisyCurveArm),
    Hpo(HpoArm),
}

/// A stateful reward source. Successive pulls return a non-decreasing
/// sequence in `[0, 1]`; clones replay identically from the clone point.
#[derive(Debug, Clone)]
pub struct ArmProcess {
    source: Source,
    pulls: u64,
}

impl ArmProcess {
    pub fn curve(curve: RewardCurve) -> Self {
        CurveArm { curve, cost: 1.0 }.into()
    }

    pub fn pulls(&self) -> u64 {
        self.pulls
    }

    /// The noise-free ground truth, when there is one.
    pub fn ground_truth(&self) -> Option<&RewardCurve> {
        match &self.source {
            Source::Curve(a) => Some(&a.curve),
            Source::Noisy(_) | Source::Hpo(_) => None,
        }
    }

    /// The underlying curve of curve-backed arms, noisy or not.
    pub fn base_curve(&self) -> Option<&RewardCurve> {
        match &self.source {
            Source::Curve(a) => Some(&a.curve),
            Source::Noisy(a) => Some(&a.curve),
            Source::Hpo(_) => None,
        }
    }

    /// Cost the next pull will charge.
    pub fn peek_cost(&self) -> f64 {
        match &self.source {
            Source::Curve(a) => a.cost,
            Source::Noisy(a) => a.cost,
            Source::Hpo(a) => a.peek_cost(),
        }
    }

    pub fn pull(&mut self) -> Pull {
        self.pulls += 1;
        let n = self.pulls;
        match &mut self.source {
            Source::Curve(a) => Pull { reward: a.curve.eval_unchecked(n), cost: a.cost },
            Source::Noisy(a) => {
                let dip = a.rng.random::<f64>() * a.noise;
                let sample = (a.curve.eval_unchecked(n) - dip).clamp(0.0, 1.0);
                a.last = a.last.max(sample);
                Pull { reward: a.last, cost: a.cost }
            }
            Source::Hpo(a) => {
                let (reward, cost) = a.step();
                Pull { reward, cost }
            }
        }
    }

    /// Rewards of the next `n` pulls of a fresh copy, leaving `self` untouched.
    pub fn replay(&self, n: u64) -> Vec<f64> {
        let mut copy = self.clone();
        (0..n).map(|_| copy.pull().reward).collect()
    }
}

impl From<CurveArm> for ArmProcess {
    fn from(a: CurveArm) -> Self {
        ArmProcess { source: Source::Curve(a), pulls: 0 }
    }
}

impl From<NoisyCurveArm> for ArmProcess {
    fn from(a: NoisyCurveArm) -> Self {
        ArmProcess { source: Source::Noisy(a), pulls: 0 }
    }
}

impl From<HpoArm> for ArmProcess {
    fn from(a: HpoArm) -> Self {
        ArmProcess { source: Source::Hpo(a), pulls: 0 }
    }
}
