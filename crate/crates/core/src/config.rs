//! Experiment configuration files.
//!
//! The format is flat `key = value` text. Top-level keys come first, then any
//! number of `[arm]` and `[policy]` blocks. `#` starts a comment.
//!
//! ```text
//! name = demo
//! horizon = trials 200        # or: budget 500
//! growth = last               # or: smooth 7
//! replications = 4
//! base_seed = 42
//!
//! [arm]
//! name = svm
//! curve = exponential 0.9 0.5 0.5
//!
//! [arm]
//! name = forest
//! kind = hpo
//! objective = rosenbrock
//! dim = 3
//! strategy = density_estimator
//! cost = 2
//!
//! [policy]
//! name = rising_bandit
//!
//! [policy]
//! name = ucb
//! coefficient = 1.0
//! ```
//!
//! See the README for every key.

use std::path::{Path, PathBuf};

use crate::bandit::{GrowthMode, Horizon, DEFAULT_EPSILON, DEFAULT_SMOOTH_WINDOW};
use crate::curves::{ArmKind, ArmSpec, InstanceSpec, Objective, RewardCurve, SearchStrategy};
use crate::error::{Error, Result};
use crate::policies::{Policy, DEFAULT_SOFTMAX_TEMPERATURE, DEFAULT_UCB_COEFFICIENT};

pub const DEFAULT_OUTPUT: &str = "rb-output";

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub name: String,
    /// Arm definitions; `instance.seed` is unused, replications derive their
    /// own.
    pub instance: InstanceSpec,
    pub policies: Vec<Policy>,
    pub horizon: Horizon,
    pub growth: GrowthMode,
    pub epsilon: f64,
    pub replications: usize,
    pub base_seed: u64,
    pub output: PathBuf,
}

impl ExperimentConfig {
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text, &path.display().to_string())
    }

    /// Parses `text`; `origin` names the source in error messages.
    pub fn parse(text: &str, origin: &str) -> Result<Self> {
        Parser { origin, ..Parser::default() }.run(text)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Section {
    Top,
    Arm,
    Policy,
}

#[derive(Debug, Default)]
struct Block {
    line: usize,
    entries: Vec<(usize, String, String)>,
}

impl Block {
    fn get(&self, key: &str) -> Option<(usize, &str)> {
        self.entries.iter().find(|(_, k, _)| k == key).map(|(l, _, v)| (*l, v.as_str()))
    }
}

#[derive(Default)]
struct Parser<'a> {
    origin: &'a str,
    top: Block,
    arms: Vec<Block>,
    policies: Vec<Block>,
}

impl Parser<'_> {
    fn error(&self, line: usize, field: &str, message: impl Into<String>) -> Error {
        Error::ConfigField {
            path: self.origin.to_string(),
            line,
            field: field.to_string(),
            message: message.into(),
        }
    }

    fn run(mut self, text: &str) -> Result<ExperimentConfig> {
        let mut section = Section::Top;
        for (index, raw) in text.lines().enumerate() {
            let line = index + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            match content {
                "[arm]" => {
                    section = Section::Arm;
                    self.arms.push(Block { line, entries: Vec::new() });
                    continue;
                }
                "[policy]" => {
                    section = Section::Policy;
                    self.policies.push(Block { line, entries: Vec::new() });
                    continue;
                }
                _ if content.starts_with('[') => {
                    return Err(self.error(line, content, "unknown section (expected [arm] or [policy])"));
                }
                _ => {}
            }
            let Some((key, value)) = content.split_once('=') else {
                return Err(self.error(line, content, "expected `key = value`"));
            };
            let (key, value) = (key.trim().to_string(), value.trim().to_string());
            let allowed: &[&str] = match section {
                Section::Top => &["name", "horizon", "growth", "replications", "base_seed", "output", "epsilon"],
                Section::Arm => &["name", "kind", "curve", "noise", "objective", "dim", "strategy", "cost", "seed"],
                Section::Policy => &["name", "coefficient", "temperature", "alpha", "beta", "growth"],
            };
            let prefix = match section {
                Section::Top => "",
                Section::Arm => "arm.",
                Section::Policy => "policy.",
            };
            if !allowed.contains(&key.as_str()) {
                return Err(self.error(line, &format!("{prefix}{key}"), "unknown key"));
            }
            let block = match section {
                Section::Top => &mut self.top,
                Section::Arm => self.arms.last_mut().expect("inside a block"),
                Section::Policy => self.policies.last_mut().expect("inside a block"),
            };
            if block.get(&key).is_some() {
                return Err(self.error(line, &format!("{prefix}{key}"), "set twice in the same block"));
            }
            block.entries.push((line, key, value));
        }
        self.build()
    }

    fn build(&self) -> Result<ExperimentConfig> {
        let top = &self.top;
        let horizon = match top.get("horizon") {
            Some((line, v)) => parse_horizon(v).map_err(|m| self.error(line, "horizon", m))?,
            None => return Err(self.error(1, "horizon", "missing (e.g. `horizon = trials 200`)")),
        };
        let growth = match top.get("growth") {
            Some((line, v)) => parse_growth(v).map_err(|m| self.error(line, "growth", m))?,
            None => GrowthMode::Last,
        };
        let replications = self.number::<usize>(top, "replications", "", 1)?;
        if replications == 0 {
            let line = top.get("replications").map_or(1, |(l, _)| l);
            return Err(self.error(line, "replications", "must be at least 1"));
        }
        let epsilon = self.number::<f64>(top, "epsilon", "", DEFAULT_EPSILON)?;
        if !(epsilon >= 0.0 && epsilon.is_finite()) {
            let line = top.get("epsilon").map_or(1, |(l, _)| l);
            return Err(self.error(line, "epsilon", "must be a finite number >= 0"));
        }

        if self.arms.is_empty() {
            return Err(self.error(1, "arm", "at least one [arm] block is required"));
        }
        let arms = self
            .arms
            .iter()
            .enumerate()
            .map(|(i, block)| self.arm(i, block))
            .collect::<Result<Vec<_>>>()?;

        if self.policies.is_empty() {
            return Err(self.error(1, "policy", "at least one [policy] block is required"));
        }
        let mut policies: Vec<Policy> = Vec::new();
        for block in &self.policies {
            let policy = self.policy(block, growth)?;
            if policies.iter().any(|p| p.name() == policy.name()) {
                let line = block.get("name").map_or(block.line, |(l, _)| l);
                return Err(self.error(line, "policy.name", format!("`{}` listed twice", policy.name())));
            }
            policies.push(policy);
        }

        Ok(ExperimentConfig {
            name: top.get("name").map_or("experiment", |(_, v)| v).to_string(),
            instance: InstanceSpec::new(arms, 0),
            policies,
            horizon,
            growth,
            epsilon,
            replications,
            base_seed: self.number::<u64>(top, "base_seed", "", 0)?,
            output: PathBuf::from(top.get("output").map_or(DEFAULT_OUTPUT, |(_, v)| v)),
        })
    }

    fn number<T: std::str::FromStr>(&self, block: &Block, key: &str, prefix: &str, default: T) -> Result<T> {
        match block.get(key) {
            Some((line, v)) => v
                .parse()
                .map_err(|_| self.error(line, &format!("{prefix}{key}"), format!("`{v}` is not a valid number"))),
            None => Ok(default),
        }
    }

    fn arm(&self, index: usize, block: &Block) -> Result<ArmSpec> {
        let name = block.get("name").map_or_else(|| format!("arm{index}"), |(_, v)| v.to_string());
        let kind = block.get("kind").map_or("curve", |(_, v)| v);
        let curve = || -> Result<RewardCurve> {
            match block.get("curve") {
                Some((line, v)) => v.parse().map_err(|e: Error| self.error(line, "arm.curve", e.to_string())),
                None => Err(self.error(block.line, "arm.curve", format!("arm `{name}` needs a curve"))),
            }
        };
        let kind = match kind {
            "curve" => ArmKind::Curve(curve()?),
            "noisy" => {
                let noise = self.number::<f64>(block, "noise", "arm.", 0.0)?;
                ArmKind::Noisy { curve: curve()?, noise }
            }
            "hpo" => {
                let objective = match block.get("objective") {
                    Some((line, v)) => v
                        .parse::<Objective>()
                        .map_err(|e| self.error(line, "arm.objective", e.to_string()))?,
                    None => Objective::Sphere,
                };
                let strategy = match block.get("strategy") {
                    Some((line, v)) => v
                        .parse::<SearchStrategy>()
                        .map_err(|e| self.error(line, "arm.strategy", e.to_string()))?,
                    None => SearchStrategy::DensityEstimator,
                };
                let dimension = self.number::<usize>(block, "dim", "arm.", 2)?;
                ArmKind::Hpo { objective, dimension, strategy }
            }
            other => {
                let line = block.get("kind").map_or(block.line, |(l, _)| l);
                return Err(self.error(line, "arm.kind", format!("unknown kind `{other}` (expected curve, noisy or hpo)")));
            }
        };
        let cost = self.number::<f64>(block, "cost", "arm.", 1.0)?;
        let seed = self.number::<u64>(block, "seed", "arm.", 0)?;
        Ok(ArmSpec { name, kind, cost, seed })
    }

    fn policy(&self, block: &Block, growth: GrowthMode) -> Result<Policy> {
        let Some((line, name)) = block.get("name") else {
            return Err(self.error(block.line, "policy.name", "missing"));
        };
        let policy = match name {
            "average" => Policy::Average,
            "ucb" => Policy::Ucb {
                coefficient: self.number(block, "coefficient", "policy.", DEFAULT_UCB_COEFFICIENT)?,
            },
            "softmax" => Policy::Softmax {
                temperature: self.number(block, "temperature", "policy.", DEFAULT_SOFTMAX_TEMPERATURE)?,
            },
            "thompson" => Policy::Thompson {
                prior_alpha: self.number(block, "alpha", "policy.", 1.0)?,
                prior_beta: self.number(block, "beta", "policy.", 1.0)?,
            },
            "rising_bandit" => Policy::RisingBandit {
                growth: match block.get("growth") {
                    Some((l, v)) => parse_growth(v).map_err(|m| self.error(l, "policy.growth", m))?,
                    None => growth,
                },
            },
            "rising_bandit_smooth" => {
                let window = match block.get("growth").map(|(l, v)| (l, parse_growth(v))) {
                    Some((_, Ok(GrowthMode::Smooth(c)))) => c,
                    Some((l, Ok(GrowthMode::Last))) => {
                        return Err(self.error(l, "policy.growth", "rising_bandit_smooth needs `smooth C`"))
                    }
                    Some((l, Err(m))) => return Err(self.error(l, "policy.growth", m)),
                    None => match growth {
                        GrowthMode::Smooth(c) => c,
                        GrowthMode::Last => DEFAULT_SMOOTH_WINDOW,
                    },
                };
                Policy::RisingBandit { growth: GrowthMode::Smooth(window) }
            }
            other => {
                return Err(self.error(
                    line,
                    "policy.name",
                    format!(
                        "unknown policy `{other}` (expected average, ucb, softmax, thompson, rising_bandit or rising_bandit_smooth)"
                    ),
                ))
            }
        };
        let invalid = match policy {
            Policy::Ucb { coefficient } => !(coefficient >= 0.0 && coefficient.is_finite()),
            Policy::Softmax { temperature } => !(temperature > 0.0 && temperature.is_finite()),
            Policy::Thompson { prior_alpha, prior_beta } => !(prior_alpha > 0.0 && prior_beta > 0.0),
            _ => false,
        };
        if invalid {
            return Err(self.error(block.line, &format!("policy.{name}"), "parameters out of range"));
        }
        Ok(policy)
    }
}

fn parse_horizon(value: &str) -> std::result::Result<Horizon, String> {
    let parts: Vec<&str> = value.split_whitespace().collect();
    match parts.as_slice() {
        ["trials", n] => match n.parse::<u64>() {
            Ok(n) if n >= 1 => Ok(Horizon::Trials(n)),
            _ => Err(format!("`{n}` is not a positive trial count")),
        },
        ["budget", b] => match b.parse::<f64>() {
            Ok(b) if b > 0.0 && b.is_finite() => Ok(Horizon::Budget(b)),
            _ => Err(format!("`{b}` is not a positive budget")),
        },
        _ => Err(format!("`{value}` (expected `trials N` or `budget B`)")),
    }
}

fn parse_growth(value: &str) -> std::result::Result<GrowthMode, String> {
    let parts: Vec<&str> = value.split_whitespace().collect();
    match parts.as_slice() {
        ["last"] => Ok(GrowthMode::Last),
        ["smooth"] => Ok(GrowthMode::Smooth(DEFAULT_SMOOTH_WINDOW)),
        ["smooth", c] => match c.parse::<usize>() {
            Ok(c) if c >= 1 => Ok(GrowthMode::Smooth(c)),
            _ => Err(format!("`{c}` is not a positive window")),
        },
        _ => Err(format!("`{value}` (expected `last` or `smooth C`)")),
    }
}
