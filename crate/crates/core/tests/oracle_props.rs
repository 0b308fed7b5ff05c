mod common;

use std::collections::BTreeSet;

use common::*;
use orbits_core::encoder::{RepairType, Semantics};
use orbits_core::model::{FactId, FactSet, PrioritizedInstance};
use orbits_core::oracle::{
    enumerate_completion_repairs, enumerate_pareto_repairs, enumerate_repairs,
    is_pareto_optimal_full, is_pareto_optimal_single, oracle_answers, OracleConfig,
};
use proptest::prelude::*;

fn usable(k: &PrioritizedInstance) -> Vec<FactId> {
    k.fact_ids().filter(|&a| !k.is_self_inconsistent(a)).collect()
}

fn consistent(k: &PrioritizedInstance, s: &FactSet) -> bool {
    s.iter().all(|&a| !k.is_self_inconsistent(a) && s.iter().all(|&b| !k.conflicting(a, b)))
}

/// Maximal consistent subsets by scanning every subset.
fn brute_repairs(k: &PrioritizedInstance) -> BTreeSet<FactSet> {
    let facts = usable(k);
    let all: Vec<FactSet> = (0u32..1 << facts.len())
        .map(|m| {
            facts
                .iter()
                .enumerate()
                .filter(|(i, _)| m >> i & 1 == 1)
                .map(|(_, &a)| a)
                .collect()
        })
        .filter(|s| consistent(k, s))
        .collect();
    all.iter()
        .filter(|s| !all.iter().any(|t| t.len() > s.len() && s.is_subset(t)))
        .cloned()
        .collect()
}

/// Acyclic orientations of the pairs left open by the priority, counted by
/// trying every orientation vector.
fn brute_completion_count(k: &PrioritizedInstance) -> u64 {
    let pairs: Vec<(FactId, FactId)> = k
        .conflicts()
        .pairs()
        .filter(|&(a, b)| !k.is_self_inconsistent(a) && !k.is_self_inconsistent(b))
        .collect();
    let open: Vec<(FactId, FactId)> = pairs
        .iter()
        .copied()
        .filter(|&(a, b)| !k.prefers(a, b) && !k.prefers(b, a))
        .collect();
    let fixed: Vec<(FactId, FactId)> = pairs
        .iter()
        .map(|&(a, b)| if k.prefers(a, b) { (a, b) } else { (b, a) })
        .filter(|&(a, b)| k.prefers(a, b))
        .collect();
    let n = k.num_facts();
    (0u32..1 << open.len())
        .filter(|m| {
            let mut edges = fixed.clone();
            for (i, &(a, b)) in open.iter().enumerate() {
                edges.push(if m >> i & 1 == 1 { (a, b) } else { (b, a) });
            }
            // Floyd-Warshall style closure on a tiny graph.
            let mut reach = vec![vec![false; n]; n];
            for (a, b) in edges {
                reach[a.index()][b.index()] = true;
            }
            for w in 0..n {
                for u in 0..n {
                    for v in 0..n {
                        if reach[u][w] && reach[w][v] {
                            reach[u][v] = true;
                        }
                    }
                }
            }
            (0..n).all(|u| !reach[u][u])
        })
        .count() as u64
}

fn small_cfg() -> OracleConfig {
    OracleConfig::default()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(160))]

    #[test]
    fn repairs_match_subset_scan(k in instance(9)) {
        let fam = enumerate_repairs(&k, &small_cfg()).unwrap();
        let got: BTreeSet<FactSet> = fam.repairs.iter().cloned().collect();
        prop_assert_eq!(got, brute_repairs(&k));
    }

    #[test]
    fn repair_chain(k in instance(8)) {
        let rep = enumerate_repairs(&k, &small_cfg()).unwrap();
        let prep = enumerate_pareto_repairs(&k, &small_cfg()).unwrap();
        let crep = enumerate_completion_repairs(&k, &small_cfg()).unwrap();
        prop_assert!(!crep.family.repairs.is_empty());
        prop_assert!(crep.family.is_subfamily_of(&prep));
        prop_assert!(prep.is_subfamily_of(&rep));
        for r in &rep.repairs {
            prop_assert!(consistent(&k, r));
        }
    }

    #[test]
    fn pareto_tests_agree(k in instance(8)) {
        for r in enumerate_repairs(&k, &small_cfg()).unwrap().repairs {
            prop_assert_eq!(is_pareto_optimal_single(&k, &r), is_pareto_optimal_full(&k, &r));
        }
    }

    #[test]
    fn completion_count_matches_orientation_scan(k in instance(7)) {
        let c = enumerate_completion_repairs(&k, &small_cfg()).unwrap();
        prop_assert_eq!(c.completions, brute_completion_count(&k));
    }

    #[test]
    fn score_structured_pareto_equals_completion(k in score_instance(8)) {
        let prep = enumerate_pareto_repairs(&k, &small_cfg()).unwrap();
        let crep = enumerate_completion_repairs(&k, &small_cfg()).unwrap();
        prop_assert_eq!(prep.repairs, crep.family.repairs);
    }

    #[test]
    fn semantics_chain(k in instance(8)) {
        for repair in RepairType::ALL {
            let v = |s| oracle_answers(&k, s, repair, &small_cfg()).unwrap().answers;
            let (iar, ar, brave) = (v(Semantics::Iar), v(Semantics::Ar), v(Semantics::Brave));
            prop_assert!(iar.is_subset(&ar));
            prop_assert!(ar.is_subset(&brave));
        }
    }
}

#[test]
fn example_frozen_values() {
    let k = example();
    let cfg = small_cfg();
    let both = vec![FactSet::from([A, G]), FactSet::from([B, D])];
    assert_eq!(enumerate_repairs(&k, &cfg).unwrap().repairs, both);
    assert_eq!(brute_repairs(&k).into_iter().collect::<Vec<_>>(), both);
    assert_eq!(enumerate_pareto_repairs(&k, &cfg).unwrap().repairs, both);
    let c = enumerate_completion_repairs(&k, &cfg).unwrap();
    assert_eq!(c.family.repairs, vec![FactSet::from([A, G])]);
    assert_eq!(c.completions, 3);
    assert_eq!(brute_completion_count(&k), 3);
}

#[test]
fn total_priority_has_one_completion() {
    let k = example()
        .with_priority(orbits_core::model::PriorityRelation::from_edges([
            (A, B),
            (G, D),
            (A, D),
            (G, B),
        ]))
        .unwrap();
    let c = enumerate_completion_repairs(&k, &small_cfg()).unwrap();
    assert_eq!((c.completions, c.family.repairs.len()), (1, 1));
}

#[test]
fn cause_inside_every_repair_holds_everywhere() {
    let base = example();
    let k = PrioritizedInstance::new(
        PrioritizedInstance::unlabeled_facts(5),
        base.conflicts().clone(),
        base.priority().clone(),
        vec![orbits_core::model::PotentialAnswer {
            answer_id: "free".into(),
            causes: vec![FactSet::from([FactId(4)])],
        }],
    )
    .unwrap();
    for sem in Semantics::ALL {
        for repair in RepairType::ALL {
            assert!(oracle_answers(&k, sem, repair, &small_cfg()).unwrap().holds[0]);
        }
    }
}
