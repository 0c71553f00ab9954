//! Seeded property suites over generated instances.
//!
//! Each suite draws its instances from a fixed seed, so a run is a
//! reproducible yes/no answer rather than a sample.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::bandit::{offline_max_run, BanditConfig, GrowthMode, DEFAULT_SMOOTH_WINDOW};
use crate::curves::RewardCurve;
use crate::error::{Error, Result};
use crate::fixtures::{self, CurveInstance, STAIRCASE_WINDOW};
use crate::harness::{
    brute_force_optimal, corollary1_check, simulate, theorem1_bound, theorem2_condition_holds,
    GroundTruth,
};
use crate::policies::Policy;
use crate::seed::SeedPath;

/// Base seed of every suite.
pub const SUITE_SEED: u64 = 20_190_801;

pub const LEMMA1_INSTANCES: usize = 200;
pub const SAFETY_INSTANCES: usize = 1000;
pub const THEOREM2_INSTANCES: usize = 100;

/// Slack for the regret comparisons.
pub const TOLERANCE: f64 = 1e-12;

/// Failures kept verbatim in a report.
const MAX_LISTED_FAILURES: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    /// Exhaustive enumeration agrees with `max_k r_k(T)`.
    Lemma1,
    /// The optimal arm is never eliminated.
    Safety,
    /// Regret stays under the `γ(T)` bound.
    Theorem1,
    /// Where `γ(T)·K ≤ T`, regret is no worse than round-robin's.
    Corollary1,
    /// On loosely concave staircases the smoothed run ends on the best arm.
    Theorem2,
}

impl Suite {
    pub const ALL: [Suite; 5] =
        [Suite::Lemma1, Suite::Safety, Suite::Theorem1, Suite::Corollary1, Suite::Theorem2];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Lemma1 => "lemma1",
            Suite::Safety => "safety",
            Suite::Theorem1 => "theorem1",
            Suite::Corollary1 => "corollary1",
            Suite::Theorem2 => "theorem2",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL.into_iter().find(|suite| suite.name() == s).ok_or_else(|| {
            Error::Config(format!(
                "unknown suite `{s}` (expected lemma1, safety, theorem1, corollary1 or theorem2)"
            ))
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub seed: u64,
    /// Instances the property was checked on. For `corollary1` only those
    /// meeting the `γ(T)` condition count.
    pub checked: usize,
    pub passed: usize,
    /// Up to ten failing instances, described.
    pub failures: Vec<String>,
}

impl SuiteReport {
    pub fn failed(&self) -> usize {
        self.checked - self.passed
    }

    pub fn ok(&self) -> bool {
        self.passed == self.checked
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: {}/{} passed, {} failed (seed {})",
            self.suite,
            self.passed,
            self.checked,
            self.failed(),
            self.seed
        )
    }
}

/// Outcome of one instance: `None` when the property does not apply.
type Check = Result<Option<std::result::Result<(), String>>>;

pub fn run_suite(suite: Suite, seed: u64) -> Result<SuiteReport> {
    let root = SeedPath::root(seed).named(suite.name());
    let results: Vec<Option<std::result::Result<(), String>>> = match suite {
        Suite::Lemma1 => par_check(LEMMA1_INSTANCES, |i| {
            let mut rng = root.child(i as u64).rng();
            check_lemma1(&fixtures::random_concave_instance(&mut rng, 2..=3, 4..=10))
        })?,
        Suite::Safety | Suite::Theorem1 | Suite::Corollary1 => {
            // the three share one instance stream
            let shared = SeedPath::root(seed).named("concave");
            par_check(SAFETY_INSTANCES, |i| {
                let mut rng = shared.child(i as u64).rng();
                let instance = fixtures::random_concave_instance(&mut rng, 2..=8, 10..=200);
                match suite {
                    Suite::Safety => check_safety(&instance),
                    Suite::Theorem1 => check_theorem1(&instance),
                    _ => check_corollary1(&instance),
                }
            })?
        }
        Suite::Theorem2 => {
            let instances = loose_concavity_instances(root, THEOREM2_INSTANCES)?;
            par_check(instances.len(), |i| check_theorem2(&instances[i]))?
        }
    };

    let mut report = SuiteReport { suite, seed, checked: 0, passed: 0, failures: Vec::new() };
    for (i, outcome) in results.into_iter().enumerate() {
        match outcome {
            None => {}
            Some(Ok(())) => {
                report.checked += 1;
                report.passed += 1;
            }
            Some(Err(why)) => {
                report.checked += 1;
                if report.failures.len() < MAX_LISTED_FAILURES {
                    report.failures.push(format!("instance {i}: {why}"));
                }
            }
        }
    }
    Ok(report)
}

fn par_check<F>(count: usize, check: F) -> Result<Vec<Option<std::result::Result<(), String>>>>
where
    F: Fn(usize) -> Check + Sync + Send,
{
    (0..count).into_par_iter().map(check).collect()
}

fn describe(instance: &CurveInstance) -> String {
    let curves: Vec<String> = instance.curves.iter().map(RewardCurve::to_string).collect();
    format!("T = {}, arms [{}]", instance.horizon, curves.join("; "))
}

fn check_lemma1(instance: &CurveInstance) -> Check {
    let truth = GroundTruth::from_curves(&instance.curves, instance.horizon)?;
    let (enumerated, _) = brute_force_optimal(&truth)?;
    let (_, offline) = offline_max_run(&instance.curves, instance.horizon)?;
    Ok(Some(if (enumerated - offline).abs() <= TOLERANCE {
        Ok(())
    } else {
        Err(format!("enumeration {enumerated} vs offline {offline}; {}", describe(instance)))
    }))
}

fn rising_bandit(instance: &CurveInstance, growth: GrowthMode) -> Result<crate::PolicyTrace> {
    simulate(
        &Policy::RisingBandit { growth },
        &instance.arms(),
        &BanditConfig::trials(instance.horizon),
        0,
    )
}

fn check_safety(instance: &CurveInstance) -> Check {
    let truth = GroundTruth::from_curves(&instance.curves, instance.horizon)?;
    let (_, best) = truth.optimal();
    let trace = rising_bandit(instance, GrowthMode::Last)?;
    // with tied limits one copy of the best curve may go; one must survive
    let survivor = trace
        .final_candidates
        .iter()
        .any(|&k| truth.value(k, instance.horizon) == best);
    Ok(Some(if survivor {
        Ok(())
    } else {
        let (star, _) = truth.optimal();
        let step = trace.eliminations.iter().find(|e| e.arm == star).map(|e| e.step);
        Err(format!("optimal arm {star} eliminated at step {step:?}; {}", describe(instance)))
    }))
}

fn check_theorem1(instance: &CurveInstance) -> Check {
    let truth = GroundTruth::from_curves(&instance.curves, instance.horizon)?;
    let (_, best) = truth.optimal();
    let gamma = truth.gamma();
    let bound = theorem1_bound(&truth, gamma.gamma);
    let trace = rising_bandit(instance, GrowthMode::Last)?;
    let regret = best - trace.final_j;
    Ok(Some(if regret <= bound.bound + TOLERANCE {
        Ok(())
    } else {
        Err(format!(
            "regret {regret} above bound {} (gamma {}); {}",
            bound.bound,
            gamma.gamma,
            describe(instance)
        ))
    }))
}

fn check_corollary1(instance: &CurveInstance) -> Check {
    let truth = GroundTruth::from_curves(&instance.curves, instance.horizon)?;
    let gamma = truth.gamma();
    let check = corollary1_check(&truth, gamma.gamma);
    if !check.condition_holds {
        return Ok(None);
    }
    let (_, best) = truth.optimal();
    let trace = rising_bandit(instance, GrowthMode::Last)?;
    let average = simulate(&Policy::Average, &instance.arms(), &BanditConfig::trials(instance.horizon), 0)?;
    let regret = best - trace.final_j;
    let average_regret = best - average.final_j;
    Ok(Some(if regret <= average_regret + TOLERANCE {
        Ok(())
    } else {
        Err(format!(
            "regret {regret} above round-robin's {average_regret} (gamma {}); {}",
            gamma.gamma,
            describe(instance)
        ))
    }))
}

/// Staircase instances on which every arm meets the loose-concavity
/// condition, drawn in order until `count` are found.
pub fn loose_concavity_instances(root: SeedPath, count: usize) -> Result<Vec<CurveInstance>> {
    let mut found = Vec::with_capacity(count);
    for i in 0.. {
        if found.len() == count {
            break;
        }
        if i >= 100 * count as u64 {
            return Err(Error::Invariant(format!(
                "only {} of {count} staircase draws met the loose-concavity condition",
                found.len()
            )));
        }
        let mut rng = root.child(i).rng();
        let instance = fixtures::staircase_instance(&mut rng);
        let truth = GroundTruth::from_curves(&instance.curves, instance.horizon)?;
        let mut holds = true;
        for k in 0..truth.arms() {
            holds &= theorem2_condition_holds(truth.sequence(k), STAIRCASE_WINDOW as usize, instance.horizon)?;
        }
        if holds {
            found.push(instance);
        }
    }
    Ok(found)
}

fn check_theorem2(instance: &CurveInstance) -> Check {
    let truth = GroundTruth::from_curves(&instance.curves, instance.horizon)?;
    let (star, best) = truth.optimal();
    let trace = rising_bandit(instance, GrowthMode::Smooth(DEFAULT_SMOOTH_WINDOW))?;
    let returned = trace.best_arm.expect("at least one pull");
    Ok(Some(if truth.value(returned, instance.horizon) == best {
        Ok(())
    } else {
        Err(format!(
            "returned arm {returned}, best is {star}; eliminated {:?}; {}",
            trace.eliminations.iter().map(|e| (e.arm, e.step)).collect::<Vec<_>>(),
            describe(instance)
        ))
    }))
}
