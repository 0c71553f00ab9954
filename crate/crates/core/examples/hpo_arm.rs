//! A toy tuning process as an arm: each pull runs one trial and reports the
//! normalized best loss so far.

use rising_bandits::curves::{ArmProcess, HpoArm, Objective, SearchStrategy};

fn main() -> rising_bandits::Result<()> {
    for objective in [Objective::Sphere, Objective::Rosenbrock, Objective::Quadratic] {
        for strategy in [SearchStrategy::Random, SearchStrategy::DensityEstimator] {
            let mut arm: ArmProcess = HpoArm::new(objective, 3, strategy, 1.0, 42)?.into();
            let mut checkpoints = Vec::new();
            let mut spent = 0.0;
            for trial in 1..=100 {
                let pull = arm.pull();
                spent += pull.cost;
                if [5, 10, 25, 50, 100].contains(&trial) {
                    checkpoints.push(format!("{trial}:{:.3}", pull.reward));
                }
            }
            println!("{objective:<10} {strategy:<17} {}  (cost {spent:.1})", checkpoints.join("  "));
        }
    }
    Ok(())
}
