//! Sixteen arms, one clearly better: where each policy spends its pulls.

use rising_bandits::bandit::BanditConfig;
use rising_bandits::fixtures::dominant_sixteen_arm_instance;
use rising_bandits::harness::{simulate, GroundTruth, RegretReport};
use rising_bandits::policies::Policy;

fn main() -> rising_bandits::Result<()> {
    let instance = dominant_sixteen_arm_instance();
    let arms = instance.arms();
    let config = BanditConfig::trials(instance.horizon);
    let policies = [Policy::rising_bandit(), Policy::Average, Policy::ucb(), Policy::softmax(), Policy::thompson()];
    let traces = policies
        .iter()
        .map(|p| simulate(p, &arms, &config, 2019))
        .collect::<rising_bandits::Result<Vec<_>>>()?;
    let truth = GroundTruth::from_curves(&instance.curves, instance.horizon)?;
    let report = RegretReport::trials(&truth, &traces, None)?;

    println!("policy          share(arm 0)  J         regret");
    for (trace, outcome) in traces.iter().zip(&report.policies) {
        println!("{:<15} {:>11.3}  {:.6}  {:.2e}", trace.policy, trace.share(0), outcome.j, outcome.regret);
    }
    Ok(())
}
