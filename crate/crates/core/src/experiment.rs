//! Seeded experiment runner behind `rising-bandits run`.
//!
//! Replications run in parallel and are merged in replication order, so the
//! trace and report bytes depend only on the configuration and the seed.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::bandit::{BanditConfig, GrowthMode, Horizon};
use crate::config::ExperimentConfig;
use crate::curves::{make_instance, ArmKind, InstanceSpec};
use crate::error::{Error, Result};
use crate::harness::{simulate, GroundTruth, RegretReport};
use crate::policies::Policy;
use crate::seed::SeedPath;
use crate::trace::PolicyTrace;

/// Environment variable that overrides the configured base seed.
pub const SEED_ENV: &str = "RB_SEED";

pub const TRACE_FILE: &str = "trace.csv";
pub const REPORT_FILE: &str = "report.json";
pub const MANIFEST_FILE: &str = "manifest.json";

pub const TRACE_HEADER: &str = "step,policy,replication,arm,reward,cost,candidate_set_size,best_so_far";

/// Slack on the budget check, for float accumulation.
const BUDGET_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    /// Worker threads; `None` lets rayon decide.
    pub jobs: Option<usize>,
    /// Overrides the configured output directory.
    pub output: Option<PathBuf>,
    /// Overrides both `RB_SEED` and the configured base seed.
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SeedSource {
    Flag,
    Env,
    Config,
}

/// `--seed`, then `RB_SEED`, then the configuration.
pub fn resolve_seed(config: &ExperimentConfig, flag: Option<u64>) -> Result<(u64, SeedSource)> {
    if let Some(seed) = flag {
        return Ok((seed, SeedSource::Flag));
    }
    match std::env::var(SEED_ENV) {
        Ok(text) => text
            .trim()
            .parse()
            .map(|seed| (seed, SeedSource::Env))
            .map_err(|_| Error::Config(format!("{SEED_ENV}=`{text}` is not an unsigned 64-bit integer"))),
        Err(_) => Ok((config.base_seed, SeedSource::Config)),
    }
}

/// Stream seeds of one replication.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReplicationSeeds {
    pub replication: usize,
    /// Root of the arm streams; arm `i` derives its own from it.
    pub arms: u64,
    /// One stream per policy, keyed by policy name.
    pub policies: Vec<(String, u64)>,
}

/// Arm streams depend on the replication only, so every policy faces the
/// same arm realizations; policy streams are keyed by name, so adding a
/// policy leaves the others unchanged.
pub fn replication_seeds(base_seed: u64, replication: usize, policies: &[Policy]) -> ReplicationSeeds {
    let root = SeedPath::root(base_seed);
    ReplicationSeeds {
        replication,
        arms: root.named("arms").child(replication as u64).value(),
        policies: policies
            .iter()
            .map(|p| (p.name().to_string(), root.named("policy").named(p.name()).child(replication as u64).value()))
            .collect(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReplicationResult {
    pub replication: usize,
    pub seeds: ReplicationSeeds,
    pub report: RegretReport,
    #[serde(skip)]
    pub traces: Vec<PolicyTrace>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PolicySummary {
    pub policy: String,
    pub mean_j: f64,
    pub mean_regret: f64,
    pub mean_total_cost: f64,
    pub mean_pulls: f64,
    /// Mean share of pulls given to the replication's oracle arm.
    pub mean_oracle_arm_share: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentOutcome {
    pub output: PathBuf,
    pub base_seed: u64,
    pub seed_source: SeedSource,
    pub replications: Vec<ReplicationResult>,
    pub summary: Vec<PolicySummary>,
}

/// Runs every replication and writes `trace.csv`, `report.json` and
/// `manifest.json` into the output directory.
pub fn run_experiment(config: &ExperimentConfig, options: &RunOptions) -> Result<ExperimentOutcome> {
    let (base_seed, seed_source) = resolve_seed(config, options.seed)?;
    let output = options.output.clone().unwrap_or_else(|| config.output.clone());
    let replications = run_replications(config, base_seed, options.jobs)?;
    let summary = summarize(config, &replications);

    fs::create_dir_all(&output)?;
    fs::write(output.join(TRACE_FILE), trace_csv(&replications))?;
    let report = report_json(config, base_seed, &replications, &summary)?;
    fs::write(output.join(REPORT_FILE), to_pretty(&report)?)?;
    fs::write(output.join(MANIFEST_FILE), to_pretty(&manifest_json(config, base_seed, seed_source, &replications))?)?;
    log::info!("wrote {} replications to {}", replications.len(), output.display());

    Ok(ExperimentOutcome { output, base_seed, seed_source, replications, summary })
}

/// Runs the replications without writing anything.
pub fn run_replications(
    config: &ExperimentConfig,
    base_seed: u64,
    jobs: Option<usize>,
) -> Result<Vec<ReplicationResult>> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(jobs) = jobs {
        builder = builder.num_threads(jobs.max(1));
    }
    let pool = builder
        .build()
        .map_err(|e| Error::Config(format!("cannot start worker pool: {e}")))?;
    pool.install(|| {
        (0..config.replications)
            .into_par_iter()
            .map(|r| run_replication(config, base_seed, r))
            .collect()
    })
}

fn bandit_config(config: &ExperimentConfig) -> BanditConfig {
    BanditConfig { horizon: config.horizon, growth: config.growth, epsilon: config.epsilon }
}

fn run_replication(config: &ExperimentConfig, base_seed: u64, replication: usize) -> Result<ReplicationResult> {
    let seeds = replication_seeds(base_seed, replication, &config.policies);
    let spec = InstanceSpec::new(config.instance.arms.clone(), seeds.arms);
    let arms = make_instance(&spec)?;
    let bandit = bandit_config(config);

    let traces = config
        .policies
        .iter()
        .zip(&seeds.policies)
        .map(|(policy, (_, seed))| simulate(policy, &arms, &bandit, *seed))
        .collect::<Result<Vec<_>>>()?;
    for trace in &traces {
        check_trace(config, trace)?;
    }

    let report = match config.horizon {
        Horizon::Trials(total) => {
            let truth = GroundTruth::replay(&arms, total)?;
            RegretReport::trials(&truth, &traces, smooth_window(config))?
        }
        Horizon::Budget(budget) => RegretReport::budget(&arms, budget, &traces),
    };
    check_report(&report, replication)?;
    Ok(ReplicationResult { replication, seeds, report, traces })
}

/// The window of the loose-concavity check: the first smoothed growth mode
/// in use, if any.
fn smooth_window(config: &ExperimentConfig) -> Option<usize> {
    let growths = config.policies.iter().filter_map(|p| match p {
        Policy::RisingBandit { growth } => Some(*growth),
        _ => None,
    });
    std::iter::once(config.growth).chain(growths).find_map(|g| match g {
        GrowthMode::Smooth(c) => Some(c),
        GrowthMode::Last => None,
    })
}

fn invariant(policy: &str, what: impl Into<String>) -> Error {
    Error::Invariant(format!("{policy}: {}", what.into()))
}

fn check_trace(config: &ExperimentConfig, trace: &PolicyTrace) -> Result<()> {
    let name = trace.policy.as_str();
    match config.horizon {
        Horizon::Trials(total) if trace.pulls() != total => {
            return Err(invariant(name, format!("{} pulls with horizon {total}", trace.pulls())));
        }
        Horizon::Budget(budget) if trace.total_cost > budget + BUDGET_SLACK => {
            return Err(invariant(name, format!("spent {} of budget {budget}", trace.total_cost)));
        }
        _ => {}
    }
    if trace.pull_counts.iter().sum::<u64>() != trace.pulls() {
        return Err(invariant(name, "pull counts do not add up to the number of pulls"));
    }
    let observed = trace.steps.iter().map(|s| s.reward).fold(0.0, f64::max);
    if observed != trace.final_j {
        return Err(invariant(name, format!("J = {} but the best reward is {observed}", trace.final_j)));
    }
    if trace.candidate_sizes().collect::<Vec<_>>().windows(2).any(|w| w[1] > w[0]) {
        return Err(invariant(name, "candidate set grew"));
    }
    Ok(())
}

fn check_report(report: &RegretReport, replication: usize) -> Result<()> {
    for outcome in &report.policies {
        if outcome.oracle_exceeded {
            return Err(Error::Invariant(format!(
                "replication {replication}: {} reached J = {} above the oracle's {}",
                outcome.policy, outcome.j, report.j_oracle
            )));
        }
    }
    if let Some(bound) = &report.theorem1 {
        if bound.bound < 0.0 {
            return Err(Error::Invariant(format!("replication {replication}: negative regret bound {}", bound.bound)));
        }
    }
    Ok(())
}

fn summarize(config: &ExperimentConfig, replications: &[ReplicationResult]) -> Vec<PolicySummary> {
    let n = replications.len() as f64;
    config
        .policies
        .iter()
        .enumerate()
        .map(|(p, policy)| {
            let mut summary = PolicySummary {
                policy: policy.name().to_string(),
                mean_j: 0.0,
                mean_regret: 0.0,
                mean_total_cost: 0.0,
                mean_pulls: 0.0,
                mean_oracle_arm_share: 0.0,
            };
            for rep in replications {
                let outcome = &rep.report.policies[p];
                let trace = &rep.traces[p];
                summary.mean_j += outcome.j / n;
                summary.mean_regret += outcome.regret / n;
                summary.mean_total_cost += outcome.total_cost / n;
                summary.mean_pulls += trace.pulls() as f64 / n;
                summary.mean_oracle_arm_share += trace.share(rep.report.oracle_arm) / n;
            }
            summary
        })
        .collect()
}

/// One row per pull, replications in order, policies in configuration order.
pub fn trace_csv(replications: &[ReplicationResult]) -> String {
    let mut out = String::from(TRACE_HEADER);
    out.push('\n');
    for rep in replications {
        for trace in &rep.traces {
            for s in &trace.steps {
                writeln!(
                    out,
                    "{},{},{},{},{},{},{},{}",
                    s.step, trace.policy, rep.replication, s.arm, s.reward, s.cost, s.candidate_set_size, s.best_so_far
                )
                .expect("writing to a String");
            }
        }
    }
    out
}

fn horizon_json(horizon: Horizon) -> Value {
    match horizon {
        Horizon::Trials(t) => json!({ "mode": "trials", "trials": t }),
        Horizon::Budget(b) => json!({ "mode": "budget", "budget": b }),
    }
}

fn growth_json(growth: GrowthMode) -> Value {
    match growth {
        GrowthMode::Last => json!({ "mode": "last" }),
        GrowthMode::Smooth(c) => json!({ "mode": "smooth", "window": c }),
    }
}

fn report_json(
    config: &ExperimentConfig,
    base_seed: u64,
    replications: &[ReplicationResult],
    summary: &[PolicySummary],
) -> Result<Value> {
    let value = json!({
        "name": config.name,
        "base_seed": base_seed,
        "horizon": horizon_json(config.horizon),
        "growth": growth_json(config.growth),
        "replications": replications,
        "summary": summary,
    });
    ensure_finite(&value, "report")?;
    Ok(value)
}

/// The configuration as parsed, for the manifest.
pub fn config_echo(config: &ExperimentConfig) -> Value {
    let arms: Vec<Value> = config
        .instance
        .arms
        .iter()
        .map(|arm| {
            let mut v = json!({ "name": arm.name, "cost": arm.cost, "seed": arm.seed });
            let fields = match &arm.kind {
                ArmKind::Curve(c) => json!({ "kind": "curve", "curve": c.to_string() }),
                ArmKind::Noisy { curve, noise } => {
                    json!({ "kind": "noisy", "curve": curve.to_string(), "noise": noise })
                }
                ArmKind::Hpo { objective, dimension, strategy } => json!({
                    "kind": "hpo",
                    "objective": objective.to_string(),
                    "dim": dimension,
                    "strategy": strategy.to_string(),
                }),
            };
            v.as_object_mut().expect("object").extend(fields.as_object().expect("object").clone());
            v
        })
        .collect();
    let policies: Vec<Value> = config
        .policies
        .iter()
        .map(|p| match *p {
            Policy::Average => json!({ "name": "average" }),
            Policy::Ucb { coefficient } => json!({ "name": "ucb", "coefficient": coefficient }),
            Policy::Softmax { temperature } => json!({ "name": "softmax", "temperature": temperature }),
            Policy::Thompson { prior_alpha, prior_beta } => {
                json!({ "name": "thompson", "alpha": prior_alpha, "beta": prior_beta })
            }
            Policy::RisingBandit { growth } => json!({ "name": p.name(), "growth": growth_json(growth) }),
        })
        .collect();
    json!({
        "name": config.name,
        "horizon": horizon_json(config.horizon),
        "growth": growth_json(config.growth),
        "epsilon": config.epsilon,
        "replications": config.replications,
        "base_seed": config.base_seed,
        "arms": arms,
        "policies": policies,
    })
}

fn manifest_json(
    config: &ExperimentConfig,
    base_seed: u64,
    seed_source: SeedSource,
    replications: &[ReplicationResult],
) -> Value {
    let timestamp = SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs());
    let seeds: Vec<&ReplicationSeeds> = replications.iter().map(|r| &r.seeds).collect();
    json!({
        "tool": env!("CARGO_PKG_NAME"),
        "version": env!("CARGO_PKG_VERSION"),
        "base_seed": base_seed,
        "seed_source": seed_source,
        "seed_scheme": "splitmix64 over fnv1a labels: arms = base/\"arms\"/replication/arm, policy = base/\"policy\"/name/replication",
        "seeds": seeds,
        "files": [TRACE_FILE, REPORT_FILE],
        "config": config_echo(config),
        "timestamp": timestamp,
    })
}

fn to_pretty(value: &Value) -> Result<String> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    Ok(text)
}

/// serde_json writes non-finite floats as `null`, and optional report fields
/// are omitted rather than null, so any `null` is a non-finite number.
fn ensure_finite(value: &Value, path: &str) -> Result<()> {
    match value {
        Value::Null => Err(Error::Invariant(format!("{path} is not a finite number"))),
        Value::Array(items) => items
            .iter()
            .enumerate()
            .try_for_each(|(i, v)| ensure_finite(v, &format!("{path}[{i}]"))),
        Value::Object(map) => map.iter().try_for_each(|(k, v)| ensure_finite(v, &format!("{path}.{k}"))),
        _ => Ok(()),
    }
}

/// Loads `path` and runs it.
pub fn run_config_file(path: &Path, options: &RunOptions) -> Result<ExperimentOutcome> {
    run_experiment(&ExperimentConfig::load(path)?, options)
}
