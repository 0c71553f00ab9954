//! Instance generators shared by the verification suites, the examples and
//! the tests.

use rand::Rng;

use crate::curves::{ArmProcess, CurveArm, RewardCurve};

/// A set of ground-truth curves with a horizon.
#[derive(Debug, Clone)]
pub struct CurveInstance {
    pub curves: Vec<RewardCurve>,
    pub horizon: u64,
}

impl CurveInstance {
    pub fn arms(&self) -> Vec<ArmProcess> {
        self.curves.iter().cloned().map(ArmProcess::curve).collect()
    }
}

/// A strictly concave curve: exponential with limit in `[0.5, 1)`, start at
/// 5–90% of the limit and decay in `[0.5, 0.98)`, or power-law with limit in
/// `[0.5, 1)`, scale at 10–95% of the limit and exponent in `[0.5, 2)`.
pub fn random_concave_curve<R: Rng + ?Sized>(rng: &mut R) -> RewardCurve {
    let limit = rng.random_range(0.5..1.0);
    if rng.random_bool(0.5) {
        let initial = limit * rng.random_range(0.05..0.9);
        let decay = rng.random_range(0.5..0.98);
        RewardCurve::exponential(limit, initial, decay).expect("parameters in range")
    } else {
        let scale = limit * rng.random_range(0.1..0.95);
        let exponent = rng.random_range(0.5..2.0);
        RewardCurve::power(limit, scale, exponent).expect("parameters in range")
    }
}

pub fn random_concave_instance<R: Rng + ?Sized>(
    rng: &mut R,
    arms: std::ops::RangeInclusive<usize>,
    horizon: std::ops::RangeInclusive<u64>,
) -> CurveInstance {
    let k = rng.random_range(arms);
    let horizon = rng.random_range(horizon);
    CurveInstance { curves: (0..k).map(|_| random_concave_curve(rng)).collect(), horizon }
}

/// Plateau length and smoothing window of the loose-concavity instances.
pub const STAIRCASE_WINDOW: u64 = 7;

/// An instance mixing staircases (plateau 7, jump 55–90% of the remaining
/// gap) with concave curves, horizon a multiple of 7 in `[35, 140]`.
///
/// With the plateau equal to the window and the horizon on a plateau end, the
/// bias against the least concave majorant shrinks by `1 − jump` per window
/// and vanishes on the last plateau, so the loose-concavity condition holds.
pub fn staircase_instance<R: Rng + ?Sized>(rng: &mut R) -> CurveInstance {
    let k = rng.random_range(2..=5);
    let horizon = STAIRCASE_WINDOW * rng.random_range(5..=20);
    let curves = (0..k)
        .map(|i| {
            if i == 0 || rng.random_bool(0.6) {
                let base = random_concave_curve(rng);
                let jump = rng.random_range(0.55..0.9);
                RewardCurve::staircase(base, STAIRCASE_WINDOW, jump).expect("parameters in range")
            } else {
                random_concave_curve(rng)
            }
        })
        .collect();
    CurveInstance { curves, horizon }
}

/// Sixteen arms: arm 0 climbs to 0.95, the others saturate between 0.60 and
/// 0.82.
pub fn dominant_sixteen_arm_instance() -> CurveInstance {
    let mut curves = vec![RewardCurve::exponential(0.95, 0.55, 0.8).expect("valid")];
    for i in 1..16 {
        let limit = 0.60 + 0.015 * (i - 1) as f64;
        curves.push(RewardCurve::exponential(limit, 0.45, 0.7).expect("valid"));
    }
    CurveInstance { curves, horizon: 500 }
}

/// Two arms on the same curve; arm 0 costs 10 per pull, arm 1 costs 1.
pub fn cost_pair_instance() -> Vec<ArmProcess> {
    let curve = RewardCurve::exponential(0.9, 0.3, 0.5).expect("valid");
    [10.0, 1.0]
        .into_iter()
        .map(|cost| CurveArm::new(curve.clone(), cost).expect("valid").into())
        .collect()
}
