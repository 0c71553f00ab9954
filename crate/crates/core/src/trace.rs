use serde::Serialize;

use crate::curves::Pull;

/// One pull of a run. `step` is 1-based; `arm` is a 0-based arm index.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StepRecord {
    pub step: u64,
    pub arm: usize,
    pub reward: f64,
    pub cost: f64,
    pub candidate_set_size: usize,
    pub best_so_far: f64,
}

/// An arm leaving the candidate set in the sweep that follows `step`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Elimination {
    pub step: u64,
    pub arm: usize,
}

/// Full record of a policy run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PolicyTrace {
    pub policy: String,
    pub steps: Vec<StepRecord>,
    /// `J(T; π)`: the best reward observed over the run, 0 if nothing was pulled.
    pub final_j: f64,
    /// Arm and step that first achieved `final_j`.
    pub best_arm: Option<usize>,
    pub best_step: Option<u64>,
    pub pull_counts: Vec<u64>,
    pub total_cost: f64,
    pub eliminations: Vec<Elimination>,
    pub final_candidates: Vec<usize>,
}

impl PolicyTrace {
    pub fn pulls(&self) -> u64 {
        self.steps.len() as u64
    }

    /// Fraction of pulls spent on `arm`.
    pub fn share(&self, arm: usize) -> f64 {
        if self.steps.is_empty() {
            return 0.0;
        }
        self.pull_counts[arm] as f64 / self.steps.len() as f64
    }

    /// Candidate-set size at each pull.
    pub fn candidate_sizes(&self) -> impl Iterator<Item = usize> + '_ {
        self.steps.iter().map(|s| s.candidate_set_size)
    }
}

pub(crate) struct TraceRecorder {
    policy: String,
    steps: Vec<StepRecord>,
    pull_counts: Vec<u64>,
    total_cost: f64,
    best: Option<(f64, usize, u64)>,
    eliminations: Vec<Elimination>,
}

impl TraceRecorder {
    pub(crate) fn new(policy: impl Into<String>, arms: usize) -> Self {
        TraceRecorder {
            policy: policy.into(),
            steps: Vec::new(),
            pull_counts: vec![0; arms],
            total_cost: 0.0,
            best: None,
            eliminations: Vec::new(),
        }
    }

    pub(crate) fn record(&mut self, arm: usize, pull: Pull, candidate_set_size: usize) {
        let step = self.steps.len() as u64 + 1;
        if self.best.is_none_or(|(r, _, _)| pull.reward > r) {
            self.best = Some((pull.reward, arm, step));
        }
        self.pull_counts[arm] += 1;
        self.total_cost += pull.cost;
        self.steps.push(StepRecord {
            step,
            arm,
            reward: pull.reward,
            cost: pull.cost,
            candidate_set_size,
            best_so_far: self.best.map_or(0.0, |b| b.0),
        });
    }

    pub(crate) fn eliminated(&mut self, arm: usize) {
        let step = self.steps.len() as u64;
        self.eliminations.push(Elimination { step, arm });
    }

    pub(crate) fn finish(self, final_candidates: Vec<usize>) -> PolicyTrace {
        PolicyTrace {
            policy: self.policy,
            final_j: self.best.map_or(0.0, |b| b.0),
            best_arm: self.best.map(|b| b.1),
            best_step: self.best.map(|b| b.2),
            steps: self.steps,
            pull_counts: self.pull_counts,
            total_cost: self.total_cost,
            eliminations: self.eliminations,
            final_candidates,
        }
    }
}
