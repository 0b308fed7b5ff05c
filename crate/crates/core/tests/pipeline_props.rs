mod common;

use common::*;
use orbits_core::crosscheck::{combinations, cross_check, CrossCheckOptions};
use orbits_core::encoder::{EncoderOptions, EncodingSpec, MaxVariant, NegVariant, RepairType, Semantics};
use orbits_core::filters::{answer_query, classify_answers, Algorithm, AnswerClass, FilterRequest};
use orbits_core::model::{FactSet, PotentialAnswer, PrioritizedInstance};
use orbits_core::oracle::{oracle_answers, OracleConfig};
use orbits_sat::SolverConfig;
use proptest::prelude::*;

fn answers(k: &PrioritizedInstance, sem: Semantics, repair: RepairType, alg: Algorithm) -> Vec<bool> {
    let req = FilterRequest::new(k, EncodingSpec::new(sem, repair, NegVariant::Neg1), alg);
    answer_query(&req).unwrap().holds
}

/// Adds, per answer, a superset of its first cause and a cause holding two
/// conflicting facts, when the instance has such a pair.
fn with_tolerated_causes(k: &PrioritizedInstance, extra: u32) -> PrioritizedInstance {
    let pair = k.conflicts().pairs().next();
    let n = k.num_facts() as u32;
    let answers = k
        .answers()
        .iter()
        .map(|a| {
            let mut causes = a.causes.clone();
            let mut sup = a.causes[0].clone();
            sup.insert(orbits_core::model::FactId(extra % n));
            causes.push(sup);
            if let Some((x, y)) = pair {
                causes.push(FactSet::from([x, y]));
            }
            PotentialAnswer {
                answer_id: a.answer_id.clone(),
                causes,
            }
        })
        .collect();
    k.with_answers(answers).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn pipeline_matches_oracle(k in instance(7)) {
        let check = cross_check(&k, &CrossCheckOptions::default()).unwrap();
        prop_assert!(check.mismatches.is_empty(), "{}", check.mismatches[0]);
        prop_assert_eq!(check.runs, combinations(&k).len());
    }

    #[test]
    fn score_structured_pareto_and_completion_agree(k in score_instance(7)) {
        for sem in Semantics::ALL {
            prop_assert_eq!(
                answers(&k, sem, RepairType::Pareto, Algorithm::Simple),
                answers(&k, sem, RepairType::Completion, Algorithm::Simple)
            );
        }
    }

    #[test]
    fn semantic_chain_and_trivial_answers(k in instance(8)) {
        for repair in RepairType::ALL {
            let reports: Vec<_> = [Semantics::Iar, Semantics::Ar, Semantics::Brave]
                .into_iter()
                .map(|sem| {
                    let req = FilterRequest::new(&k, EncodingSpec::new(sem, repair, NegVariant::Neg2), Algorithm::Assumptions);
                    answer_query(&req).unwrap()
                })
                .collect();
            prop_assert!(reports[0].answers.is_subset(&reports[1].answers));
            prop_assert!(reports[1].answers.is_subset(&reports[2].answers));
            for r in &reports {
                prop_assert!(r.trivial_answers.is_subset(&reports[0].answers));
                prop_assert!(r.trivial_answers.is_subset(&r.answers));
            }
        }
    }

    #[test]
    fn tolerated_causes_change_nothing(k in instance(7), extra in any::<u32>()) {
        let wide = with_tolerated_causes(&k, extra);
        for sem in Semantics::ALL {
            for repair in RepairType::ALL {
                let alg = if sem == Semantics::Ar { Algorithm::AllMaxSat } else { Algorithm::CauseByCause };
                prop_assert_eq!(answers(&k, sem, repair, alg), answers(&wide, sem, repair, alg));
            }
        }
    }

    #[test]
    fn neg_and_pareto_variants_agree(k in instance(8)) {
        for sem in Semantics::ALL {
            let base = EncodingSpec::new(sem, RepairType::Pareto, NegVariant::Neg1);
            let reference = answer_query(&FilterRequest::new(&k, base, Algorithm::Simple)).unwrap().answers;
            for neg in [NegVariant::Neg1, NegVariant::Neg2] {
                for max in [MaxVariant::P1, MaxVariant::P2] {
                    let spec = EncodingSpec::new(sem, RepairType::Pareto, neg).with_max(max);
                    let got = answer_query(&FilterRequest::new(&k, spec, Algorithm::Simple)).unwrap().answers;
                    prop_assert_eq!(&got, &reference);
                }
            }
        }
    }

    #[test]
    fn seed_does_not_change_answers(k in instance(8), seed in any::<u64>()) {
        for sem in Semantics::ALL {
            let spec = EncodingSpec::new(sem, RepairType::Completion, NegVariant::Neg2);
            let plain = answer_query(&FilterRequest::new(&k, spec, Algorithm::AllMaxSat)).unwrap();
            let mut req = FilterRequest::new(&k, spec, Algorithm::AllMaxSat);
            req.solver = SolverConfig { seed, conflict_budget: None };
            prop_assert_eq!(answer_query(&req).unwrap().answers, plain.answers);
        }
    }

    #[test]
    fn partial_reports_are_sound(k in instance(8), budget in 0..4u64) {
        for sem in Semantics::ALL {
            for alg in Algorithm::all_for(sem) {
                let spec = EncodingSpec::new(sem, RepairType::Completion, NegVariant::Neg1);
                let full = answer_query(&FilterRequest::new(&k, spec, alg)).unwrap();
                let mut req = FilterRequest::new(&k, spec, alg);
                req.solver.conflict_budget = Some(budget);
                let part = answer_query(&req).unwrap();
                prop_assert!(part.answers.is_subset(&full.answers));
                if part.complete {
                    prop_assert_eq!(&part.answers, &full.answers);
                }
            }
        }
    }

    #[test]
    fn classes_are_consistent_with_oracle(k in instance(7)) {
        let cfg = OracleConfig::default();
        for repair in RepairType::ALL {
            let classes = classify_answers(&k, repair, SolverConfig::default(), EncoderOptions::default()).unwrap();
            let iar = oracle_answers(&k, Semantics::Iar, repair, &cfg).unwrap().holds;
            let ar = oracle_answers(&k, Semantics::Ar, repair, &cfg).unwrap().holds;
            let brave = oracle_answers(&k, Semantics::Brave, repair, &cfg).unwrap().holds;
            for (i, c) in classes.iter().enumerate() {
                let expected_bucket = if iar[i] { 0 } else if ar[i] { 1 } else if brave[i] { 2 } else { 3 };
                let bucket = match c {
                    AnswerClass::Trivial | AnswerClass::IarNotTrivial => 0,
                    AnswerClass::ArNotIar => 1,
                    AnswerClass::BraveNotAr => 2,
                    AnswerClass::NotBrave => 3,
                };
                prop_assert_eq!(bucket, expected_bucket);
            }
        }
    }
}

#[test]
fn example_every_combination() {
    let k = example();
    let expected = |sem: Semantics, repair: RepairType| match (sem, repair) {
        (Semantics::Iar, RepairType::Completion) => true,
        (Semantics::Ar, RepairType::Pareto) => true,
        (Semantics::Iar, RepairType::Pareto) => false,
        (Semantics::Brave, RepairType::Pareto) => true,
        _ => oracle_answers(&k, sem, repair, &OracleConfig::default()).unwrap().holds[0],
    };
    for (spec, alg) in combinations(&k) {
        let r = answer_query(&FilterRequest::new(&k, spec, alg)).unwrap();
        assert_eq!(r.holds, vec![expected(spec.sem, spec.repair)], "{spec} {alg}");
    }
    let check = cross_check(&k, &CrossCheckOptions::default()).unwrap();
    assert!(check.mismatches.is_empty());
}

#[test]
fn dropping_acyclicity_breaks_the_example() {
    let k = example();
    let opts = CrossCheckOptions {
        encoder: EncoderOptions {
            drop_acyclicity: true,
            ..Default::default()
        },
        ..Default::default()
    };
    let check = cross_check(&k, &opts).unwrap();
    assert!(!check.mismatches.is_empty());
    assert!(check
        .mismatches
        .iter()
        .all(|m| m.spec.repair == RepairType::Completion));
}
