//! Ground-truth reward curves and the arm processes that emit them.

mod arm;
mod curve;
mod hpo;
mod instance;

pub use arm::{ArmProcess, CurveArm, NoisyCurveArm, Pull};
pub use curve::RewardCurve;
pub use hpo::{HpoArm, Objective, SearchStrategy, MAX_DIMENSION, MIN_DIMENSION};
pub use instance::{make_instance, ArmKind, ArmSpec, InstanceSpec};

use crate::error::Result;

/// Evaluates `curve` at pull count `n ≥ 1`.
pub fn curve_eval(curve: &RewardCurve, n: u64) -> Result<f64> {
    curve.eval(n)
}
