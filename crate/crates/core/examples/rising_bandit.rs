//! The elimination algorithm on two arms, step by step.

use rising_bandits::bandit::{rising_bandit_run, BanditConfig};
use rising_bandits::curves::{ArmProcess, RewardCurve};
use rising_bandits::harness::{compute_gamma, theorem1_bound, GroundTruth};

fn main() -> rising_bandits::Result<()> {
    let curves = vec![RewardCurve::exponential(0.9, 0.5, 0.5)?, RewardCurve::exponential(0.95, 0.3, 0.8)?];
    let horizon = 5;
    let mut arms: Vec<ArmProcess> = curves.iter().cloned().map(ArmProcess::curve).collect();
    let trace = rising_bandit_run(&mut arms, &BanditConfig::trials(horizon))?;

    println!("step arm reward candidates best");
    for s in &trace.steps {
        println!("{:>4} {:>3} {:>6.4} {:>10} {:.4}", s.step, s.arm, s.reward, s.candidate_set_size, s.best_so_far);
    }
    for e in &trace.eliminations {
        println!("arm {} eliminated after step {}", e.arm, e.step);
    }

    let truth = GroundTruth::from_curves(&curves, horizon)?;
    let (star, best) = truth.optimal();
    let gamma = compute_gamma(&curves, horizon)?;
    println!("J = {:.4} from arm {:?}; offline optimum {best:.4} on arm {star}", trace.final_j, trace.best_arm);
    println!("gamma(T) = {}, regret bound {:.4}", gamma.gamma, theorem1_bound(&truth, gamma.gamma).bound);
    Ok(())
}
