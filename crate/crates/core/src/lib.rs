//! Rising bandits: algorithm selection over tuning processes whose rewards
//! grow with the resource they receive.
//!
//! Each arm is the hyperparameter search of one learning algorithm; pulling it
//! runs one more trial and returns the best validation score so far. The
//! rewards are therefore bounded and non-decreasing, and usually show
//! diminishing returns. The goal is the best score seen within a horizon, not
//! the sum of rewards.
//!
//! - [`curves`]: ground-truth reward curves, arm processes, a toy HPO process.
//! - [`bandit`]: the elimination algorithm with last-increment, smoothed and
//!   cost-aware upper bounds.
//! - [`policies`]: round-robin, UCB, softmax and Thompson baselines.
//! - [`harness`]: simulation, regret, `γ(T)`, the regret-bound checks and a
//!   brute-force oracle.
//! - [`config`], [`experiment`], [`verify`]: the configuration format, the
//!   seeded experiment runner and the property suites behind the CLI.
//!
//! ```
//! use rising_bandits::bandit::{rising_bandit_run, BanditConfig};
//! use rising_bandits::curves::{ArmProcess, RewardCurve};
//!
//! let mut arms = vec![
//!     ArmProcess::curve(RewardCurve::exponential(0.9, 0.5, 0.5)?),
//!     ArmProcess::curve(RewardCurve::exponential(0.95, 0.3, 0.8)?),
//! ];
//! let trace = rising_bandit_run(&mut arms, &BanditConfig::trials(5))?;
//! assert_eq!(trace.best_arm, Some(0));
//! # Ok::<(), rising_bandits::Error>(())
//! ```

pub mod bandit;
pub mod config;
pub mod curves;
mod error;
pub mod experiment;
pub mod fixtures;
pub mod harness;
pub mod policies;
pub mod seed;
mod trace;
pub mod verify;

pub use error::{Error, Result};
pub use trace::{Elimination, PolicyTrace, StepRecord};
