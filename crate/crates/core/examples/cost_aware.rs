//! Budget mode: two copies of one curve, one ten times as expensive per pull.

use rising_bandits::bandit::BanditConfig;
use rising_bandits::fixtures::cost_pair_instance;
use rising_bandits::harness::{simulate, RegretReport};
use rising_bandits::policies::Policy;

fn main() -> rising_bandits::Result<()> {
    let arms = cost_pair_instance();
    for budget in [100.0, 300.0, 1000.0] {
        let policies = [Policy::rising_bandit(), Policy::Average, Policy::ucb()];
        let traces = policies
            .iter()
            .map(|p| simulate(p, &arms, &BanditConfig::budget(budget), 0))
            .collect::<rising_bandits::Result<Vec<_>>>()?;
        let report = RegretReport::budget(&arms, budget, &traces);
        println!("budget {budget}: oracle J {:.6}", report.j_oracle);
        for (trace, outcome) in traces.iter().zip(&report.policies) {
            println!(
                "  {:<14} pulls {:?} spent {:>7.1} J {:.6} regret {:.2e}",
                trace.policy, trace.pull_counts, trace.total_cost, outcome.j, outcome.regret
            );
        }
    }
    Ok(())
}
