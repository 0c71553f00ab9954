use super::arm::{ArmProcess, CurveArm, NoisyCurveArm};
use super::curve::RewardCurve;
use super::hpo::{HpoArm, Objective, SearchStrategy};
use crate::error::{Error, Result};
use crate::seed::SeedPath;

#[derive(Debug, Clone, PartialEq)]
pub enum ArmKind {
    Curve(RewardCurve),
    Noisy { curve: RewardCurve, noise: f64 },
    Hpo { objective: Objective, dimension: usize, strategy: SearchStrategy },
}

#[derive(Debug, Clone, PartialEq)]
pub struct ArmSpec {
    pub name: String,
    pub kind: ArmKind,
    /// Per-pull cost (the mean cost for HPO arms).
    pub cost: f64,
    /// Mixed into the arm's stream; arms with equal seeds still get distinct
    /// streams because the arm index is part of the derivation.
    pub seed: u64,
}

impl ArmSpec {
    pub fn curve(name: impl Into<String>, curve: RewardCurve) -> Self {
        ArmSpec { name: name.into(), kind: ArmKind::Curve(curve), cost: 1.0, seed: 0 }
    }

    pub fn with_cost(mut self, cost: f64) -> Self {
        self.cost = cost;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }
}

/// A K-armed problem description.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct InstanceSpec {
    pub arms: Vec<ArmSpec>,
    pub seed: u64,
}

impl InstanceSpec {
    pub fn new(arms: Vec<ArmSpec>, seed: u64) -> Self {
        InstanceSpec { arms, seed }
    }

    pub fn from_curves(curves: &[RewardCurve]) -> Self {
        let arms = curves
            .iter()
            .enumerate()
            .map(|(i, c)| ArmSpec::curve(format!("arm{i}"), c.clone()))
            .collect();
        InstanceSpec { arms, seed: 0 }
    }
}

/// Builds independent arm processes, each on its own derived RNG stream.
pub fn make_instance(spec: &InstanceSpec) -> Result<Vec<ArmProcess>> {
    if spec.arms.is_empty() {
        return Err(Error::Config("instance needs at least one arm".into()));
    }
    let root = SeedPath::root(spec.seed);
    spec.arms
        .iter()
        .enumerate()
        .map(|(i, arm)| {
            let seed = root.child(i as u64).child(arm.seed).value();
            build_arm(arm, seed).map_err(|e| {
                Error::Config(format!("arm `{}` (index {i}): {}", arm.name, strip_prefix(&e)))
            })
        })
        .collect()
}

fn build_arm(arm: &ArmSpec, seed: u64) -> Result<ArmProcess> {
    Ok(match &arm.kind {
        ArmKind::Curve(curve) => CurveArm::new(curve.clone(), arm.cost)?.into(),
        ArmKind::Noisy { curve, noise } => {
            NoisyCurveArm::new(curve.clone(), *noise, arm.cost, seed)?.into()
        }
        ArmKind::Hpo { objective, dimension, strategy } => {
            HpoArm::new(*objective, *dimension, *strategy, arm.cost, seed)?.into()
        }
    })
}

fn strip_prefix(e: &Error) -> String {
    match e {
        Error::Config(m) | Error::InvalidCurve(m) => m.clone(),
        other => other.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn exp(limit: f64) -> RewardCurve {
        RewardCurve::exponential(limit, 0.2, 0.8).unwrap()
    }

    #[test]
    fn empty_instance_is_rejected() {
        assert!(matches!(make_instance(&InstanceSpec::default()), Err(Error::Config(_))));
    }

    #[test]
    fn single_and_sixteen_arm_instances() {
        assert_eq!(make_instance(&InstanceSpec::from_curves(&[exp(0.9)])).unwrap().len(), 1);
        let curves: Vec<_> = (0..16).map(|i| exp(0.5 + 0.03 * i as f64)).collect();
        assert_eq!(make_instance(&InstanceSpec::from_curves(&curves)).unwrap().len(), 16);
    }

    #[test]
    fn heterogeneous_instance() {
        let spec = InstanceSpec::new(
            vec![
                ArmSpec::curve("lr", exp(0.8)),
                ArmSpec {
                    name: "gbm".into(),
                    kind: ArmKind::Hpo {
                        objective: Objective::Rosenbrock,
                        dimension: 2,
                        strategy: SearchStrategy::DensityEstimator,
                    },
                    cost: 4.0,
                    seed: 9,
                },
            ],
            1,
        );
        let arms = make_instance(&spec).unwrap();
        assert!(arms[0].ground_truth().is_some());
        assert!(arms[1].ground_truth().is_none());
    }

    #[test]
    fn bad_arm_error_names_the_arm() {
        let spec = InstanceSpec::new(vec![ArmSpec::curve("svm", exp(0.8)).with_cost(-1.0)], 0);
        let msg = make_instance(&spec).unwrap_err().to_string();
        assert!(msg.contains("svm"), "{msg}");
    }

    #[test]
    fn identical_noisy_arms_get_distinct_streams() {
        let arm = ArmSpec {
            name: "n".into(),
            kind: ArmKind::Noisy { curve: exp(0.9), noise: 0.3 },
            cost: 1.0,
            seed: 0,
        };
        let spec = InstanceSpec::new(vec![arm.clone(), arm], 4);
        let arms = make_instance(&spec).unwrap();
        assert_ne!(arms[0].replay(20), arms[1].replay(20));
        let again = make_instance(&spec).unwrap();
        assert_eq!(arms[0].replay(20), again[0].replay(20));
    }
}
