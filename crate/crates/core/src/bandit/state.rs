use crate::curves::Pull;

/// Per-arm bookkeeping of the rising bandit.
#[derive(Debug, Clone, PartialEq)]
pub struct ArmState {
    pub id: usize,
    history: Vec<f64>,
    /// `None` until enough observations exist to estimate the growth rate.
    pub growth_rate: Option<f64>,
    /// Upper bound on the reward this arm can still reach within the horizon.
    pub upper: f64,
    /// Last observed reward.
    pub lower: f64,
    pub active: bool,
    total_cost: f64,
}

impl ArmState {
    pub fn new(id: usize) -> Self {
        ArmState {
            id,
            history: Vec::new(),
            growth_rate: None,
            upper: 1.0,
            lower: 0.0,
            active: true,
            total_cost: 0.0,
        }
    }

    /// Adds an observation and sets `lower` to it. Bounds derived from the
    /// growth rate are the caller's job.
    pub fn observe(&mut self, pull: Pull) {
        self.history.push(pull.reward);
        self.lower = pull.reward;
        self.upper = self.upper.max(self.lower);
        self.total_cost += pull.cost;
    }

    pub fn history(&self) -> &[f64] {
        &self.history
    }

    pub fn pulls(&self) -> u64 {
        self.history.len() as u64
    }

    pub fn last(&self) -> Option<f64> {
        self.history.last().copied()
    }

    pub fn total_cost(&self) -> f64 {
        self.total_cost
    }

    /// Running arithmetic mean of observed pull costs.
    pub fn mean_cost(&self) -> Option<f64> {
        (!self.history.is_empty()).then(|| self.total_cost / self.history.len() as f64)
    }

    pub fn mean_reward(&self) -> Option<f64> {
        (!self.history.is_empty())
            .then(|| self.history.iter().sum::<f64>() / self.history.len() as f64)
    }
}

/// Arms not yet proven suboptimal, in ascending id order. Never empty.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CandidateSet(Vec<usize>);

impl CandidateSet {
    /// `{0, 1, …, arms − 1}`.
    ///
    /// # Panics
    ///
    /// Panics if `arms == 0`.
    pub fn full(arms: usize) -> Self {
        assert!(arms > 0, "candidate set cannot be empty");
        CandidateSet((0..arms).collect())
    }

    /// Returns `None` for an empty list.
    pub fn from_ids(mut ids: Vec<usize>) -> Option<Self> {
        ids.sort_unstable();
        ids.dedup();
        (!ids.is_empty()).then_some(CandidateSet(ids))
    }

    pub fn ids(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, id: usize) -> bool {
        self.0.binary_search(&id).is_ok()
    }
}
