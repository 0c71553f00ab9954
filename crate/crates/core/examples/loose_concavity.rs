//! Staircase rewards break the last-increment bound; the smoothed growth rate
//! over a window of 7 pulls does not.

use rising_bandits::bandit::{BanditConfig, GrowthMode};
use rising_bandits::curves::{ArmProcess, RewardCurve};
use rising_bandits::harness::{concave_majorant, simulate, theorem2_condition_holds, GroundTruth};
use rising_bandits::policies::Policy;

fn main() -> rising_bandits::Result<()> {
    let curves = vec![
        RewardCurve::staircase(RewardCurve::exponential(0.95, 0.3, 0.8)?, 7, 0.7)?,
        RewardCurve::exponential(0.8, 0.5, 0.6)?,
    ];
    let horizon = 140;
    let truth = GroundTruth::from_curves(&curves, horizon)?;
    let stairs = truth.sequence(0);
    let hull = concave_majorant(stairs);
    println!("n    y(n)   majorant");
    for n in [1, 7, 8, 14, 15, 21, 22] {
        println!("{n:<4} {:.4} {:.4}", stairs[n - 1], hull[n - 1]);
    }
    println!("bias condition holds: {}", theorem2_condition_holds(stairs, 7, horizon)?);

    let arms: Vec<ArmProcess> = curves.iter().cloned().map(ArmProcess::curve).collect();
    let config = BanditConfig::trials(horizon);
    for growth in [GrowthMode::Last, GrowthMode::smooth()] {
        let trace = simulate(&Policy::RisingBandit { growth }, &arms, &config, 0)?;
        println!(
            "{:<21} J {:.4} from arm {:?}, pulls {:?}, eliminated {:?}",
            trace.policy,
            trace.final_j,
            trace.best_arm,
            trace.pull_counts,
            trace.eliminations.iter().map(|e| (e.arm, e.step)).collect::<Vec<_>>()
        );
    }
    println!("best arm at T: {:?}", truth.optimal());
    Ok(())
}
