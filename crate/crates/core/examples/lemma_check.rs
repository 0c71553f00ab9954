//! Exhaustive enumeration of every pull sequence agrees with always pulling
//! the arm that is best at the horizon.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rising_bandits::bandit::offline_max_run;
use rising_bandits::fixtures::random_concave_instance;
use rising_bandits::harness::{brute_force_optimal, GroundTruth};

fn main() -> rising_bandits::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..5 {
        let instance = random_concave_instance(&mut rng, 2..=3, 4..=10);
        let truth = GroundTruth::from_curves(&instance.curves, instance.horizon)?;
        let (enumerated, witness) = brute_force_optimal(&truth)?;
        let (arm, offline) = offline_max_run(&instance.curves, instance.horizon)?;
        println!(
            "K={} T={:>2}: enumerated {enumerated:.6} via {witness:?}, always-arm-{arm} {offline:.6}",
            instance.curves.len(),
            instance.horizon
        );
        assert_eq!(enumerated, offline);
    }
    Ok(())
}
