use super::GroundTruth;
use crate::error::{Error, Result};

/// Largest number of pull sequences [`brute_force_optimal`] will enumerate.
pub const ENUMERATION_LIMIT: u64 = 10_000_000;

/// Best `J` over every one of the `K^T` pull sequences, and one sequence
/// achieving it. `J` of a sequence is the largest reward it observes, where
/// the `m`-th pull of arm `k` yields `r_k(m)`.
pub fn brute_force_optimal(truth: &GroundTruth) -> Result<(f64, Vec<usize>)> {
    let arms = truth.arms();
    let horizon = truth.horizon();
    let too_large = || Error::InstanceTooLarge { arms, horizon: horizon as usize, limit: ENUMERATION_LIMIT };
    let exp = u32::try_from(horizon).map_err(|_| too_large())?;
    match (arms as u64).checked_pow(exp) {
        Some(n) if n <= ENUMERATION_LIMIT => {}
        _ => return Err(too_large()),
    }

    let mut search = Search {
        truth,
        counts: vec![0; arms],
        path: Vec::with_capacity(horizon as usize),
        best: f64::NEG_INFINITY,
        witness: Vec::new(),
    };
    search.descend(0.0);
    Ok((search.best, search.witness))
}

struct Search<'a> {
    truth: &'a GroundTruth,
    counts: Vec<u64>,
    path: Vec<usize>,
    best: f64,
    witness: Vec<usize>,
}

impl Search<'_> {
    fn descend(&mut self, observed: f64) {
        if self.path.len() as u64 == self.truth.horizon() {
            if observed > self.best {
                self.best = observed;
                self.witness = self.path.clone();
            }
            return;
        }
        for k in 0..self.truth.arms() {
            self.counts[k] += 1;
            self.path.push(k);
            let reward = self.truth.value(k, self.counts[k]);
            self.descend(observed.max(reward));
            self.path.pop();
            self.counts[k] -= 1;
        }
    }
}
