//! Seeded random instances.

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::ModelError;
use crate::model::{ConflictSet, FactId, FactSet, PotentialAnswer, PrioritizedInstance, PriorityRelation};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct InstanceParams {
    pub facts: usize,
    /// Distinct binary conflicts.
    pub conflicts: usize,
    /// Facts marked self-inconsistent.
    pub self_inconsistent: usize,
    pub answers: usize,
    /// Causes per answer are drawn from `1..=max_causes`.
    pub max_causes: usize,
    /// Cause sizes are drawn from `1..=max_cause_size`.
    pub max_cause_size: usize,
}

impl Default for InstanceParams {
    fn default() -> Self {
        InstanceParams {
            facts: 8,
            conflicts: 8,
            self_inconsistent: 0,
            answers: 3,
            max_causes: 3,
            max_cause_size: 2,
        }
    }
}

/// An instance with uniformly drawn conflicts and causes and no priority.
pub fn random_instance(params: &InstanceParams, seed: u64) -> Result<PrioritizedInstance, ModelError> {
    let n = params.facts;
    let all_pairs = n * n.saturating_sub(1) / 2;
    if params.conflicts > all_pairs {
        return Err(ModelError::Infeasible(format!(
            "{} conflicts requested but {n} facts allow at most {all_pairs}",
            params.conflicts
        )));
    }
    if params.self_inconsistent > n {
        return Err(ModelError::Infeasible(format!(
            "{} self-inconsistent facts requested out of {n}",
            params.self_inconsistent
        )));
    }
    if params.answers > 0 && (n == 0 || params.max_causes == 0 || params.max_cause_size == 0) {
        return Err(ModelError::Infeasible(
            "answers need facts, causes and a positive cause size".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut conflicts = ConflictSet::new();
    for k in sample(&mut rng, all_pairs.max(1), params.conflicts.min(all_pairs)) {
        let (a, b) = unrank_pair(k, n);
        conflicts.add_pair(FactId(a as u32), FactId(b as u32))?;
    }
    if params.self_inconsistent > 0 {
        for a in sample(&mut rng, n, params.self_inconsistent) {
            conflicts.add_self_inconsistent(FactId(a as u32));
        }
    }
    let mut answers = Vec::with_capacity(params.answers);
    for i in 0..params.answers {
        let k = rng.gen_range(1..=params.max_causes);
        let causes = (0..k)
            .map(|_| {
                let size = rng.gen_range(1..=params.max_cause_size.min(n));
                sample(&mut rng, n, size)
                    .into_iter()
                    .map(|a| FactId(a as u32))
                    .collect::<FactSet>()
            })
            .collect();
        answers.push(PotentialAnswer {
            answer_id: format!("a{i}"),
            causes,
        });
    }
    PrioritizedInstance::new(
        PrioritizedInstance::unlabeled_facts(n),
        conflicts,
        PriorityRelation::new(),
        answers,
    )
}

/// The `k`-th pair `(a, b)` with `a < b` in lexicographic order.
fn unrank_pair(mut k: usize, n: usize) -> (usize, usize) {
    for a in 0..n {
        let row = n - a - 1;
        if k < row {
            return (a, a + 1 + k);
        }
        k -= row;
    }
    unreachable!("pair rank out of range")
}
