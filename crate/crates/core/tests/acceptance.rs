//! Acceptance gate: one line per criterion, non-zero exit if any fails.

use std::path::Path;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rising_bandits::bandit::BanditConfig;
use rising_bandits::config::ExperimentConfig;
use rising_bandits::experiment::{run_experiment, RunOptions, MANIFEST_FILE, REPORT_FILE, TRACE_FILE};
use rising_bandits::fixtures::{cost_pair_instance, dominant_sixteen_arm_instance};
use rising_bandits::harness::simulate;
use rising_bandits::policies::Policy;
use rising_bandits::verify::{run_suite, Suite, SUITE_SEED};

/// Pulls the rising bandit gives the dominant arm of the sixteen-arm fixture.
const DOMINANT_ARM_PULLS: u64 = 271;
const DOMINANT_SHARE_FLOOR: f64 = 0.40;
const COST_PAIR_BUDGET: f64 = 1000.0;

type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    pass: bool,
    detail: String,
}

fn suite(suite: Suite, limit: Duration) -> Outcome {
    let start = Instant::now();
    match run_suite(suite, SUITE_SEED) {
        Ok(report) => {
            let elapsed = start.elapsed();
            let mut detail = format!("{report} in {:.2?}", elapsed);
            if let Some(first) = report.failures.first() {
                detail.push_str(&format!("; first failure: {first}"));
            }
            Outcome { pass: report.ok() && report.checked > 0 && elapsed < limit, detail }
        }
        Err(e) => Outcome { pass: false, detail: e.to_string() },
    }
}

fn resource_allocation() -> Outcome {
    let instance = dominant_sixteen_arm_instance();
    let config = BanditConfig::trials(instance.horizon);
    let rb = simulate(&Policy::rising_bandit(), &instance.arms(), &config, 0).expect("valid instance");
    let avg = simulate(&Policy::Average, &instance.arms(), &config, 0).expect("valid instance");
    let share = rb.share(0);
    let pass = rb.pull_counts[0] == DOMINANT_ARM_PULLS
        && share > 1.0 / 16.0
        && share > avg.share(0)
        && share > DOMINANT_SHARE_FLOOR;
    Outcome {
        pass,
        detail: format!(
            "dominant arm got {}/{} pulls (share {share:.3}, golden {DOMINANT_ARM_PULLS}), round-robin share {:.3}",
            rb.pull_counts[0],
            rb.pulls(),
            avg.share(0)
        ),
    }
}

fn cost_aware() -> Outcome {
    let arms = cost_pair_instance();
    let budget = simulate(&Policy::rising_bandit(), &arms, &BanditConfig::budget(COST_PAIR_BUDGET), 0)
        .expect("valid instance");
    let cheap = budget.pull_counts[1];
    let trials = simulate(&Policy::rising_bandit(), &arms, &BanditConfig::trials(cheap), 0).expect("valid instance");
    let pass = cheap > budget.pull_counts[0]
        && budget.total_cost <= COST_PAIR_BUDGET
        && budget.final_j >= trials.final_j;
    Outcome {
        pass,
        detail: format!(
            "pulls (cost 10, cost 1) = {:?}, spent {} of {COST_PAIR_BUDGET}, J {} vs trials-mode J {} at T = {cheap}",
            budget.pull_counts, budget.total_cost, budget.final_j, trials.final_j
        ),
    }
}

fn without_timestamp(manifest: &str) -> String {
    manifest.lines().filter(|l| !l.trim_start().starts_with("\"timestamp\"")).collect::<Vec<_>>().join("\n")
}

fn determinism() -> Outcome {
    let mut mismatches = Vec::new();

    for s in Suite::ALL {
        let a = serde_json::to_string(&run_suite(s, SUITE_SEED).expect("suite runs")).expect("serializable");
        let b = serde_json::to_string(&run_suite(s, SUITE_SEED).expect("suite runs")).expect("serializable");
        if a != b {
            mismatches.push(format!("suite {s}"));
        }
    }

    let config_path = Path::new(env!("CARGO_MANIFEST_DIR")).join("examples/configs/cash.cfg");
    let config = ExperimentConfig::load(&config_path).expect("shipped config parses");
    let dirs = [tempfile::tempdir().expect("tempdir"), tempfile::tempdir().expect("tempdir")];
    for (dir, jobs) in dirs.iter().zip([1, 4]) {
        let options = RunOptions { jobs: Some(jobs), output: Some(dir.path().to_path_buf()), seed: Some(SUITE_SEED) };
        run_experiment(&config, &options).expect("experiment runs");
    }
    let read = |i: usize, file: &str| std::fs::read_to_string(dirs[i].path().join(file)).expect("output written");
    for file in [TRACE_FILE, REPORT_FILE] {
        if read(0, file) != read(1, file) {
            mismatches.push(file.to_string());
        }
    }
    if without_timestamp(&read(0, MANIFEST_FILE)) != without_timestamp(&read(1, MANIFEST_FILE)) {
        mismatches.push(MANIFEST_FILE.to_string());
    }

    Outcome {
        pass: mismatches.is_empty(),
        detail: if mismatches.is_empty() {
            "five suites and the sample experiment (1 vs 4 threads) reproduce byte for byte".into()
        } else {
            format!("differs: {}", mismatches.join(", "))
        },
    }
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("offline optimum equals exhaustive enumeration", || suite(Suite::Lemma1, Duration::from_secs(60))),
        ("elimination never drops the optimal arm", || suite(Suite::Safety, Duration::from_secs(120))),
        ("regret within the gamma bound", || suite(Suite::Theorem1, Duration::from_secs(120))),
        ("no worse than round-robin when gamma is small", || suite(Suite::Corollary1, Duration::from_secs(120))),
        ("smoothed rate finds the best staircase arm", || suite(Suite::Theorem2, Duration::from_secs(120))),
        ("dominant arm receives the largest share", resource_allocation),
        ("cost-aware bound favours the cheap arm", cost_aware),
        ("reruns are byte-identical", determinism),
    ];

    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let outcome = check();
        let verdict = if outcome.pass { "PASS" } else { "FAIL" };
        println!("criterion {} [{verdict}] {name}: {}", i + 1, outcome.detail);
        failed += usize::from(!outcome.pass);
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
