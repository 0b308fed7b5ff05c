#![allow(dead_code)]

use orbits_core::generate::{random_instance, InstanceParams};
use orbits_core::model::{ConflictSet, FactId, FactSet, PotentialAnswer, PrioritizedInstance, PriorityRelation};
use orbits_core::priority::{build_random_priority, build_score_priority, random_scores};
use proptest::prelude::*;

pub const A: FactId = FactId(0);
pub const B: FactId = FactId(1);
pub const G: FactId = FactId(2);
pub const D: FactId = FactId(3);

pub fn example() -> PrioritizedInstance {
    PrioritizedInstance::new(
        PrioritizedInstance::unlabeled_facts(4),
        ConflictSet::from_pairs([(A, B), (G, D), (A, D), (B, G)]).unwrap(),
        PriorityRelation::from_edges([(A, B), (G, D)]),
        vec![PotentialAnswer {
            answer_id: "q(a)".into(),
            causes: vec![FactSet::from([A]), FactSet::from([B])],
        }],
    )
    .unwrap()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PriorityMode {
    Empty,
    Score(u32),
    Random(f64),
}

pub fn with_priority(inst: PrioritizedInstance, mode: PriorityMode, seed: u64) -> PrioritizedInstance {
    let prio = match mode {
        PriorityMode::Empty => PriorityRelation::new(),
        PriorityMode::Score(levels) => {
            let scores = random_scores(inst.conflicts(), levels, seed);
            build_score_priority(inst.conflicts(), &scores).unwrap()
        }
        PriorityMode::Random(p) => build_random_priority(inst.conflicts(), p, seed).unwrap(),
    };
    inst.with_priority(prio).unwrap()
}

pub fn priority_mode() -> impl Strategy<Value = PriorityMode> {
    prop_oneof![
        Just(PriorityMode::Empty),
        Just(PriorityMode::Score(2)),
        Just(PriorityMode::Score(5)),
        Just(PriorityMode::Random(0.5)),
        Just(PriorityMode::Random(0.8)),
    ]
}

/// Instances with at most `max_facts` facts and 12 conflicts.
pub fn instance(max_facts: usize) -> impl Strategy<Value = PrioritizedInstance> {
    (2..=max_facts, any::<u64>(), priority_mode(), 0..=1usize)
        .prop_flat_map(|(n, seed, mode, si)| {
            let max_c = (n * (n - 1) / 2).min(12);
            (Just(n), 0..=max_c, Just(seed), Just(mode), Just(si))
        })
        .prop_map(|(n, m, seed, mode, si)| {
            let params = InstanceParams {
                facts: n,
                conflicts: m,
                self_inconsistent: si,
                answers: 3,
                max_causes: 3,
                max_cause_size: 2,
            };
            with_priority(random_instance(&params, seed).unwrap(), mode, seed ^ 0x5eed)
        })
}

/// Instances whose priority comes from random scores.
pub fn score_instance(max_facts: usize) -> impl Strategy<Value = PrioritizedInstance> {
    (instance(max_facts), 1..=5u32, any::<u64>())
        .prop_map(|(k, levels, seed)| with_priority(k, PriorityMode::Score(levels), seed))
}
