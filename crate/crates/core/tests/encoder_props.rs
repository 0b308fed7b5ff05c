mod common;

use std::collections::BTreeMap;

use common::*;
use orbits_core::encoder::{
    encode_max, CnfFormula, Encoder, EncoderOptions, EncodingSpec, MaxVariant, NegVariant,
    RepairType, Semantics, Target, VarKey,
};
use orbits_core::filters::{extract_trivial_answers, remove_self_inconsistent};
use orbits_core::model::{FactId, FactSet, PrioritizedInstance};
use orbits_sat::{dimacs, solve, Model, SolveResult};
use proptest::prelude::*;

fn model_of(f: &CnfFormula) -> Option<Model> {
    match solve(f.num_vars(), f.hard()).unwrap() {
        SolveResult::Sat(m) => Some(m),
        SolveResult::Unsat { .. } => None,
    }
}

/// Instance after preprocessing, as the filters see it.
fn prepared(k: &PrioritizedInstance) -> PrioritizedInstance {
    let (clean, _) = remove_self_inconsistent(k);
    let (_, rest) = extract_trivial_answers(&clean);
    clean.with_answers(rest.into_iter().map(|(_, a)| a).collect()).unwrap()
}

fn encoder(k: &PrioritizedInstance, sem: Semantics, repair: RepairType, neg: NegVariant) -> Encoder<'_> {
    Encoder::new(k, EncodingSpec::new(sem, repair, neg), EncoderOptions::default()).unwrap()
}

/// Whether the chosen completion orientation in `m` contains a cycle.
fn orientation_cyclic(f: &CnfFormula, m: &Model) -> bool {
    let mut succ: BTreeMap<FactId, Vec<FactId>> = BTreeMap::new();
    for (i, key) in f.registry().keys().iter().enumerate() {
        if let VarKey::CompOrder { hi, lo, .. } = *key {
            if m.var_value(orbits_sat::Var(i as u32)) {
                succ.entry(hi).or_default().push(lo);
            }
        }
    }
    let nodes: Vec<FactId> = succ.keys().copied().collect();
    nodes.iter().any(|&start| {
        let mut stack = succ.get(&start).cloned().unwrap_or_default();
        let mut seen = FactSet::new();
        while let Some(v) = stack.pop() {
            if v == start {
                return true;
            }
            if seen.insert(v) {
                stack.extend(succ.get(&v).cloned().unwrap_or_default());
            }
        }
        false
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn neg_variants_are_equisatisfiable(k in instance(8)) {
        let k = prepared(&k);
        for repair in RepairType::ALL {
            for sem in [Semantics::Ar, Semantics::Iar] {
                let e1 = encoder(&k, sem, repair, NegVariant::Neg1);
                let e2 = encoder(&k, sem, repair, NegVariant::Neg2);
                for i in 0..k.answers().len() {
                    let f1 = e1.single(Target::Answer(i)).unwrap();
                    let f2 = e2.single(Target::Answer(i)).unwrap();
                    prop_assert_eq!(model_of(&f1).is_some(), model_of(&f2).is_some());
                }
            }
        }
    }

    #[test]
    fn completion_models_are_acyclic(k in instance(8)) {
        let k = prepared(&k);
        let e = encoder(&k, Semantics::Brave, RepairType::Completion, NegVariant::Neg1);
        for (i, ans) in k.answers().iter().enumerate() {
            for c in 0..ans.causes.len() {
                let f = e.single(Target::Cause { answer: i, cause: c }).unwrap();
                if let Some(m) = model_of(&f) {
                    prop_assert!(!orientation_cyclic(&f, &m));
                }
            }
        }
    }

    #[test]
    fn encoding_is_deterministic(k in instance(8)) {
        let k = prepared(&k);
        for repair in RepairType::ALL {
            let e = encoder(&k, Semantics::Iar, repair, NegVariant::Neg2);
            let all: Vec<usize> = (0..k.answers().len()).collect();
            let a = e.multi_answers(&all).unwrap().export_dimacs(true);
            let b = encoder(&k, Semantics::Iar, repair, NegVariant::Neg2).multi_answers(&all).unwrap().export_dimacs(true);
            prop_assert_eq!(a, b);
        }
    }

    #[test]
    fn scopes_nest(k in instance(8)) {
        let k = prepared(&k);
        let e = encoder(&k, Semantics::Ar, RepairType::Pareto, NegVariant::Neg1);
        for i in 0..k.answers().len() {
            let f = e.single(Target::Answer(i)).unwrap();
            for s in f.scopes() {
                prop_assert!(s.first.is_subset(&s.second));
                prop_assert_eq!(&s.second, &k.reachable(&s.first).union(&s.first).copied().collect::<FactSet>());
            }
        }
    }

    #[test]
    fn pareto_one_has_a_clause_per_reachable_fact(k in instance(8), mask in any::<u16>()) {
        let seed: FactSet = k.fact_ids().filter(|a| mask >> a.0 & 1 == 1).collect();
        let (clauses, used) = encode_max(&k, MaxVariant::P1, &seed, None, &EncoderOptions::default()).unwrap();
        prop_assert_eq!(clauses.len(), k.reachable(&seed).len());
        prop_assert_eq!(used, k.reachable(&seed));
    }

    #[test]
    fn dimacs_roundtrip(k in instance(8)) {
        let k = prepared(&k);
        let e = encoder(&k, Semantics::Ar, RepairType::Completion, NegVariant::Neg1);
        let all: Vec<usize> = (0..k.answers().len()).collect();
        let f = e.multi_answers(&all).unwrap();
        let cnf = dimacs::parse_cnf(&f.export_dimacs(false)).unwrap();
        prop_assert_eq!(cnf.num_vars, f.num_vars());
        prop_assert_eq!(cnf.clauses, f.hard().to_vec());
    }
}

#[test]
fn acyclicity_is_what_rules_out_the_cyclic_completion() {
    let k = example();
    let spec = EncodingSpec::new(Semantics::Iar, RepairType::Completion, NegVariant::Neg1);
    let f = Encoder::new(&k, spec, EncoderOptions::default())
        .unwrap()
        .single(Target::Fact(A))
        .unwrap();
    assert!(model_of(&f).is_none());

    let mutant = EncoderOptions {
        drop_acyclicity: true,
        ..Default::default()
    };
    let f = Encoder::new(&k, spec, mutant).unwrap().single(Target::Fact(A)).unwrap();
    let m = model_of(&f).expect("a cyclic orientation excludes alpha");
    assert!(orientation_cyclic(&f, &m));
}

#[test]
fn invalid_targets_and_specs() {
    let k = example();
    let ar = encoder(&k, Semantics::Ar, RepairType::Pareto, NegVariant::Neg1);
    assert!(ar.single(Target::Fact(A)).is_err());
    assert!(ar.multi_facts(&FactSet::from([A])).is_err());
    let spec = EncodingSpec::new(Semantics::Ar, RepairType::Completion, NegVariant::Neg1).with_max(MaxVariant::P1);
    assert!(Encoder::new(&k, spec, EncoderOptions::default()).is_err());
}

#[test]
fn subset_repairs_ignore_the_priority() {
    let k = example();
    let e = encoder(&k, Semantics::Iar, RepairType::Subset, NegVariant::Neg1);
    assert!(e.instance().priority().is_empty());
    let f = e.single(Target::Fact(A)).unwrap();
    assert!(model_of(&f).is_some());
}
