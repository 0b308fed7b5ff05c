//! Brute-force repair enumeration for small instances.
//!
//! A set of facts is consistent when it holds no conflict pair and no
//! self-inconsistent fact; it entails an answer when it contains one of the
//! answer's causes.

use std::collections::{BTreeMap, BTreeSet};

use crate::encoder::{RepairType, Semantics};
use crate::error::OracleError;
use crate::model::{FactId, FactSet, PrioritizedInstance};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleConfig {
    /// Largest number of facts involved in conflicts.
    pub fact_cap: usize,
    /// Largest number of conflict pairs left unoriented by the priority.
    pub unoriented_pair_cap: usize,
    /// Instances with at most this many facts also run the exhaustive
    /// Pareto check.
    pub full_pareto_cap: usize,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            fact_cap: 22,
            unoriented_pair_cap: 16,
            full_pareto_cap: 12,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RepairFamily {
    pub kind: RepairType,
    /// Sorted and free of duplicates.
    pub repairs: Vec<FactSet>,
}

impl RepairFamily {
    fn new(kind: RepairType, repairs: impl IntoIterator<Item = FactSet>) -> Self {
        let set: BTreeSet<FactSet> = repairs.into_iter().collect();
        RepairFamily {
            kind,
            repairs: set.into_iter().collect(),
        }
    }

    pub fn contains(&self, r: &FactSet) -> bool {
        self.repairs.binary_search(r).is_ok()
    }

    pub fn is_subfamily_of(&self, other: &RepairFamily) -> bool {
        self.repairs.iter().all(|r| other.contains(r))
    }

    pub fn intersection(&self) -> FactSet {
        let mut it = self.repairs.iter();
        let Some(first) = it.next() else {
            return FactSet::new();
        };
        it.fold(first.clone(), |acc, r| acc.intersection(r).copied().collect())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompletionRepairs {
    pub family: RepairFamily,
    /// Number of acyclic completions enumerated.
    pub completions: u64,
}

/// Conflict structure restricted to facts that can appear in a repair.
struct Reduced {
    /// Facts usable in repairs.
    universe: FactSet,
    /// Facts in some conflict pair, indexed for bitmask work.
    conflicting: Vec<FactId>,
    pos: BTreeMap<FactId, usize>,
    adj: Vec<u64>,
    /// Conflict pairs as (i, j) indices with i < j.
    pairs: Vec<(usize, usize)>,
}

impl Reduced {
    fn new(inst: &PrioritizedInstance, cfg: &OracleConfig) -> Result<Self, OracleError> {
        let universe: FactSet = inst
            .fact_ids()
            .filter(|&a| !inst.is_self_inconsistent(a))
            .collect();
        let conflicting: Vec<FactId> = universe
            .iter()
            .copied()
            .filter(|&a| inst.neighbors(a).iter().any(|b| universe.contains(b)))
            .collect();
        if conflicting.len() > cfg.fact_cap {
            return Err(OracleError::TooManyFacts {
                found: conflicting.len(),
                cap: cfg.fact_cap,
            });
        }
        let pos: BTreeMap<FactId, usize> =
            conflicting.iter().enumerate().map(|(i, &a)| (a, i)).collect();
        let mut adj = vec![0u64; conflicting.len()];
        let mut pairs = Vec::new();
        for (i, &a) in conflicting.iter().enumerate() {
            for b in inst.neighbors(a) {
                if let Some(&j) = pos.get(b) {
                    adj[i] |= 1 << j;
                    if i < j {
                        pairs.push((i, j));
                    }
                }
            }
        }
        Ok(Reduced {
            universe,
            conflicting,
            pos,
            adj,
            pairs,
        })
    }

    fn free_facts(&self) -> FactSet {
        self.universe
            .iter()
            .copied()
            .filter(|a| !self.pos.contains_key(a))
            .collect()
    }

    fn to_set(&self, mask: u64) -> FactSet {
        let mut s = self.free_facts();
        s.extend(
            self.conflicting
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &a)| a),
        );
        s
    }

    /// Maximal independent sets, as maximal cliques of the complement.
    fn maximal_independent_sets(&self) -> Vec<u64> {
        let n = self.conflicting.len();
        let all = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
        let non_adj: Vec<u64> = (0..n).map(|i| all & !self.adj[i] & !(1 << i)).collect();
        let mut out = Vec::new();
        bron_kerbosch(&non_adj, 0, all, 0, &mut out);
        out
    }
}

fn bron_kerbosch(nbr: &[u64], r: u64, mut p: u64, mut x: u64, out: &mut Vec<u64>) {
    if p == 0 {
        if x == 0 {
            out.push(r);
        }
        return;
    }
    let pivot = (p | x).trailing_zeros() as usize;
    let mut cand = p & !nbr[pivot];
    while cand != 0 {
        let v = cand.trailing_zeros() as usize;
        let bit = 1u64 << v;
        cand &= !bit;
        bron_kerbosch(nbr, r | bit, p & nbr[v], x & nbr[v], out);
        p &= !bit;
        x |= bit;
    }
}

/// All inclusion-maximal consistent subsets.
pub fn enumerate_repairs(
    inst: &PrioritizedInstance,
    cfg: &OracleConfig,
) -> Result<RepairFamily, OracleError> {
    let red = Reduced::new(inst, cfg)?;
    let sets = red.maximal_independent_sets();
    Ok(RepairFamily::new(
        RepairType::Subset,
        sets.into_iter().map(|m| red.to_set(m)),
    ))
}

fn is_consistent(inst: &PrioritizedInstance, s: &FactSet) -> bool {
    s.iter().all(|&a| {
        !inst.is_self_inconsistent(a) && inst.neighbors(a).iter().all(|b| !s.contains(b))
    })
}

/// Whether the repair `r` admits no single-fact Pareto improvement: no
/// `b` outside `r` is preferred to every fact of `r` it conflicts with.
pub fn is_pareto_optimal_single(inst: &PrioritizedInstance, r: &FactSet) -> bool {
    !inst.fact_ids().any(|b| {
        !r.contains(&b)
            && !inst.is_self_inconsistent(b)
            && inst
                .neighbors(b)
                .iter()
                .filter(|a| r.contains(a))
                .all(|&a| inst.prefers(b, a))
    })
}

/// Exhaustive check over every consistent `B`: `B` improves `r` when some
/// `b` in `B \ r` is preferred to every fact of `r \ B`.
pub fn is_pareto_optimal_full(inst: &PrioritizedInstance, r: &FactSet) -> bool {
    let facts: Vec<FactId> = inst
        .fact_ids()
        .filter(|&a| !inst.is_self_inconsistent(a))
        .collect();
    assert!(facts.len() < 32, "exhaustive Pareto check needs a small instance");
    for mask in 0u32..(1 << facts.len()) {
        let b: FactSet = facts
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, &a)| a)
            .collect();
        if !is_consistent(inst, &b) {
            continue;
        }
        let lost: Vec<FactId> = r.difference(&b).copied().collect();
        if b
            .difference(r)
            .any(|&g| lost.iter().all(|&a| inst.prefers(g, a)))
        {
            return false;
        }
    }
    true
}

/// Pareto-optimal repairs. Small instances are checked against the
/// exhaustive definition as well.
pub fn enumerate_pareto_repairs(
    inst: &PrioritizedInstance,
    cfg: &OracleConfig,
) -> Result<RepairFamily, OracleError> {
    let all = enumerate_repairs(inst, cfg)?;
    let check_full = inst.num_facts() <= cfg.full_pareto_cap;
    let mut keep = Vec::new();
    for r in all.repairs {
        let opt = is_pareto_optimal_single(inst, &r);
        if check_full {
            assert_eq!(
                opt,
                is_pareto_optimal_full(inst, &r),
                "Pareto tests disagree on {r:?}"
            );
        }
        if opt {
            keep.push(r);
        }
    }
    Ok(RepairFamily::new(RepairType::Pareto, keep))
}

/// Completion-optimal repairs: each acyclic completion of the priority over
/// the conflict pairs yields one repair by greedily taking the facts not
/// dominated by any remaining fact.
pub fn enumerate_completion_repairs(
    inst: &PrioritizedInstance,
    cfg: &OracleConfig,
) -> Result<CompletionRepairs, OracleError> {
    let red = Reduced::new(inst, cfg)?;
    let n = red.conflicting.len();
    // succ[i]: facts that fact i is above.
    let mut succ = vec![0u64; n];
    let mut open = Vec::new();
    for &(i, j) in &red.pairs {
        let (a, b) = (red.conflicting[i], red.conflicting[j]);
        if inst.prefers(a, b) {
            succ[i] |= 1 << j;
        } else if inst.prefers(b, a) {
            succ[j] |= 1 << i;
        } else {
            open.push((i, j));
        }
    }
    if open.len() > cfg.unoriented_pair_cap {
        return Err(OracleError::TooManyUnorientedPairs {
            found: open.len(),
            cap: cfg.unoriented_pair_cap,
        });
    }
    let mut results = BTreeSet::new();
    let mut count = 0u64;
    orient(&open, 0, &mut succ, &mut |succ| {
        count += 1;
        results.insert(red.to_set(greedy_repair(&red, succ)));
    });
    Ok(CompletionRepairs {
        family: RepairFamily::new(RepairType::Completion, results),
        completions: count,
    })
}

fn reaches(succ: &[u64], from: usize, to: usize) -> bool {
    let mut seen = 1u64 << from;
    let mut stack = vec![from];
    while let Some(v) = stack.pop() {
        if v == to {
            return true;
        }
        let mut next = succ[v] & !seen;
        seen |= next;
        while next != 0 {
            let w = next.trailing_zeros() as usize;
            next &= next - 1;
            stack.push(w);
        }
    }
    false
}

fn orient(open: &[(usize, usize)], k: usize, succ: &mut Vec<u64>, visit: &mut dyn FnMut(&[u64])) {
    if k == open.len() {
        visit(succ);
        return;
    }
    let (i, j) = open[k];
    for (hi, lo) in [(i, j), (j, i)] {
        if reaches(succ, lo, hi) {
            continue;
        }
        succ[hi] |= 1 << lo;
        orient(open, k + 1, succ, visit);
        succ[hi] &= !(1 << lo);
    }
}

fn greedy_repair(red: &Reduced, succ: &[u64]) -> u64 {
    let n = red.conflicting.len();
    let mut remaining: u64 = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let mut repair = 0u64;
    while remaining != 0 {
        let mut dominated = 0u64;
        let mut rest = remaining;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            dominated |= succ[v];
        }
        let top = remaining & !dominated;
        assert!(top != 0, "completion must be acyclic");
        let mut blocked = top;
        let mut t = top;
        while t != 0 {
            let v = t.trailing_zeros() as usize;
            t &= t - 1;
            blocked |= red.adj[v];
        }
        repair |= top;
        remaining &= !blocked;
    }
    repair
}

pub fn enumerate_family(
    inst: &PrioritizedInstance,
    repair: RepairType,
    cfg: &OracleConfig,
) -> Result<RepairFamily, OracleError> {
    match repair {
        RepairType::Subset => enumerate_repairs(inst, cfg),
        RepairType::Pareto => enumerate_pareto_repairs(inst, cfg),
        RepairType::Completion => enumerate_completion_repairs(inst, cfg).map(|c| c.family),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleVerdict {
    /// Per answer, in instance order.
    pub holds: Vec<bool>,
    /// Identifiers of the answers that hold.
    pub answers: BTreeSet<String>,
    /// The intersection of the repairs, for IAR.
    pub intersection: Option<FactSet>,
}

pub fn answers_from_family(
    inst: &PrioritizedInstance,
    sem: Semantics,
    family: &RepairFamily,
) -> OracleVerdict {
    let intersection = (sem == Semantics::Iar).then(|| family.intersection());
    let entails = |r: &FactSet, causes: &[FactSet]| causes.iter().any(|c| c.is_subset(r));
    let holds: Vec<bool> = inst
        .answers()
        .iter()
        .map(|ans| match sem {
            Semantics::Brave => family.repairs.iter().any(|r| entails(r, &ans.causes)),
            Semantics::Ar => family.repairs.iter().all(|r| entails(r, &ans.causes)),
            Semantics::Iar => entails(intersection.as_ref().expect("set for IAR"), &ans.causes),
        })
        .collect();
    let answers = inst
        .answers()
        .iter()
        .zip(&holds)
        .filter(|(_, &h)| h)
        .map(|(a, _)| a.answer_id.clone())
        .collect();
    OracleVerdict {
        holds,
        answers,
        intersection,
    }
}

/// Evaluates every answer directly from the repairs of the given kind.
pub fn oracle_answers(
    inst: &PrioritizedInstance,
    sem: Semantics,
    repair: RepairType,
    cfg: &OracleConfig,
) -> Result<OracleVerdict, OracleError> {
    let family = enumerate_family(inst, repair, cfg)?;
    Ok(answers_from_family(inst, sem, &family))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{ConflictSet, PotentialAnswer, PriorityRelation};

    const A: FactId = FactId(0);
    const B: FactId = FactId(1);
    const G: FactId = FactId(2);
    const D: FactId = FactId(3);

    fn inst(n: usize, pairs: &[(FactId, FactId)], prio: &[(FactId, FactId)], causes: Vec<FactSet>) -> PrioritizedInstance {
        PrioritizedInstance::new(
            PrioritizedInstance::unlabeled_facts(n),
            ConflictSet::from_pairs(pairs.iter().copied()).unwrap(),
            PriorityRelation::from_edges(prio.iter().copied()),
            vec![PotentialAnswer {
                answer_id: "q(a)".into(),
                causes,
            }],
        )
        .unwrap()
    }

    fn example() -> PrioritizedInstance {
        inst(
            4,
            &[(A, B), (G, D), (A, D), (B, G)],
            &[(A, B), (G, D)],
            vec![FactSet::from([A]), FactSet::from([B])],
        )
    }

    #[test]
    fn example_families() {
        let k = example();
        let cfg = OracleConfig::default();
        let both = vec![FactSet::from([A, G]), FactSet::from([B, D])];
        assert_eq!(enumerate_repairs(&k, &cfg).unwrap().repairs, both);
        assert_eq!(enumerate_pareto_repairs(&k, &cfg).unwrap().repairs, both);
        let c = enumerate_completion_repairs(&k, &cfg).unwrap();
        assert_eq!(c.family.repairs, vec![FactSet::from([A, G])]);
        assert_eq!(c.completions, 3);
    }

    #[test]
    fn example_verdicts() {
        let k = example();
        let cfg = OracleConfig::default();
        let yes = |s, r| oracle_answers(&k, s, r, &cfg).unwrap().holds[0];
        assert!(yes(Semantics::Iar, RepairType::Completion));
        assert!(yes(Semantics::Ar, RepairType::Pareto));
        assert!(!yes(Semantics::Iar, RepairType::Pareto));
        assert!(yes(Semantics::Brave, RepairType::Pareto));
        let v = oracle_answers(&k, Semantics::Iar, RepairType::Pareto, &cfg).unwrap();
        assert_eq!(v.intersection, Some(FactSet::new()));
    }

    #[test]
    fn trivial_families() {
        let cfg = OracleConfig::default();
        let k = inst(3, &[], &[], vec![FactSet::from([A])]);
        assert_eq!(enumerate_repairs(&k, &cfg).unwrap().repairs, vec![FactSet::from([A, B, G])]);

        let k = inst(3, &[(A, B)], &[], vec![FactSet::from([A])]);
        assert_eq!(
            enumerate_repairs(&k, &cfg).unwrap().repairs,
            vec![FactSet::from([A, G]), FactSet::from([B, G])]
        );
        assert_eq!(enumerate_pareto_repairs(&k, &cfg).unwrap().repairs.len(), 2);
        let c = enumerate_completion_repairs(&k, &cfg).unwrap();
        assert_eq!((c.completions, c.family.repairs.len()), (2, 2));

        let k = inst(2, &[(A, B)], &[(A, B)], vec![FactSet::from([A])]);
        assert_eq!(enumerate_pareto_repairs(&k, &cfg).unwrap().repairs, vec![FactSet::from([A])]);
        let c = enumerate_completion_repairs(&k, &cfg).unwrap();
        assert_eq!((c.completions, c.family.repairs.len()), (1, 1));
    }

    #[test]
    fn conflicting_cause_never_holds() {
        let cfg = OracleConfig::default();
        let k = inst(2, &[(A, B)], &[], vec![FactSet::from([A, B])]);
        for sem in Semantics::ALL {
            for rep in RepairType::ALL {
                assert!(!oracle_answers(&k, sem, rep, &cfg).unwrap().holds[0]);
            }
        }
    }

    #[test]
    fn self_inconsistent_facts_are_excluded() {
        let cfg = OracleConfig::default();
        let mut conflicts = ConflictSet::from_pairs([(A, B)]).unwrap();
        conflicts.add_self_inconsistent(A);
        let k = PrioritizedInstance::new(
            PrioritizedInstance::unlabeled_facts(2),
            conflicts,
            PriorityRelation::new(),
            vec![],
        )
        .unwrap();
        assert_eq!(enumerate_repairs(&k, &cfg).unwrap().repairs, vec![FactSet::from([B])]);
    }

    #[test]
    fn caps() {
        let cfg = OracleConfig {
            fact_cap: 3,
            unoriented_pair_cap: 1,
            full_pareto_cap: 12,
        };
        let k = example();
        assert_eq!(
            enumerate_repairs(&k, &cfg),
            Err(OracleError::TooManyFacts { found: 4, cap: 3 })
        );
        let cfg = OracleConfig {
            fact_cap: 22,
            ..cfg
        };
        assert_eq!(
            enumerate_completion_repairs(&k, &cfg),
            Err(OracleError::TooManyUnorientedPairs { found: 2, cap: 1 })
        );
    }
}
