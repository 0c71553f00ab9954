//! Regret against the offline optimum and the bound quantities, as JSON.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rising_bandits::bandit::BanditConfig;
use rising_bandits::fixtures::random_concave_instance;
use rising_bandits::harness::{simulate, GroundTruth, RegretReport};
use rising_bandits::policies::Policy;

fn main() -> rising_bandits::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let instance = random_concave_instance(&mut rng, 4..=4, 120..=120);
    for (k, curve) in instance.curves.iter().enumerate() {
        println!("arm {k}: {curve}");
    }
    let arms = instance.arms();
    let config = BanditConfig::trials(instance.horizon);
    let traces = [Policy::rising_bandit(), Policy::Average]
        .iter()
        .map(|p| simulate(p, &arms, &config, 0))
        .collect::<rising_bandits::Result<Vec<_>>>()?;
    let truth = GroundTruth::from_curves(&instance.curves, instance.horizon)?;
    let report = RegretReport::trials(&truth, &traces, None)?;
    println!("{}", serde_json::to_string_pretty(&report)?);
    Ok(())
}
