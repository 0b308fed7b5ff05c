//! Constructing priority relations and recognizing score-structured ones.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::ModelError;
use crate::model::{find_cycle, ConflictSet, FactId, PriorityRelation};

/// `a > b` for every conflict pair where `a` has the strictly higher score.
pub fn build_score_priority(
    conflicts: &ConflictSet,
    scores: &BTreeMap<FactId, u32>,
) -> Result<PriorityRelation, ModelError> {
    let mut p = PriorityRelation::new();
    for (a, b) in conflicts.pairs() {
        let sa = *scores.get(&a).ok_or(ModelError::MissingScore(a))?;
        let sb = *scores.get(&b).ok_or(ModelError::MissingScore(b))?;
        if sa > sb {
            p.insert(a, b);
        } else if sb > sa {
            p.insert(b, a);
        }
    }
    Ok(p)
}

/// Uniform scores in `1..=levels` for every conflicting fact.
pub fn random_scores(conflicts: &ConflictSet, levels: u32, rng_seed: u64) -> BTreeMap<FactId, u32> {
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    conflicts
        .conflicting_facts()
        .into_iter()
        .map(|f| (f, rng.gen_range(1..=levels.max(1))))
        .collect()
}

/// Orients each conflict pair with probability `p`, in ascending pair order,
/// skipping orientations that would close a cycle.
pub fn build_random_priority(
    conflicts: &ConflictSet,
    p: f64,
    rng_seed: u64,
) -> Result<PriorityRelation, ModelError> {
    if !(0.0..=1.0).contains(&p) {
        return Err(ModelError::BadProbability(p));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let mut rel = PriorityRelation::new();
    let mut succ: BTreeMap<FactId, Vec<FactId>> = BTreeMap::new();
    for (a, b) in conflicts.pairs() {
        if !rng.gen_bool(p) {
            continue;
        }
        let (hi, lo) = if rng.gen_bool(0.5) { (a, b) } else { (b, a) };
        if reaches(&succ, lo, hi) {
            continue;
        }
        rel.insert(hi, lo);
        succ.entry(hi).or_default().push(lo);
    }
    Ok(rel)
}

fn reaches(succ: &BTreeMap<FactId, Vec<FactId>>, from: FactId, to: FactId) -> bool {
    let mut stack = vec![from];
    let mut seen = std::collections::BTreeSet::new();
    while let Some(v) = stack.pop() {
        if v == to {
            return true;
        }
        if seen.insert(v) {
            if let Some(ws) = succ.get(&v) {
                stack.extend(ws.iter().copied());
            }
        }
    }
    false
}

/// Whether some score function induces exactly `priority` on the conflict
/// pairs. Incomparable conflicting facts must share a score, so those are
/// merged first; the strict edges between the merged classes must then be
/// acyclic.
pub fn is_score_structured(conflicts: &ConflictSet, priority: &PriorityRelation) -> bool {
    let mut parent: BTreeMap<FactId, FactId> = BTreeMap::new();
    fn find(parent: &mut BTreeMap<FactId, FactId>, x: FactId) -> FactId {
        let p = *parent.get(&x).unwrap_or(&x);
        if p == x {
            return x;
        }
        let r = find(parent, p);
        parent.insert(x, r);
        r
    }
    for (a, b) in conflicts.pairs() {
        if !priority.prefers(a, b) && !priority.prefers(b, a) {
            let ra = find(&mut parent, a);
            let rb = find(&mut parent, b);
            if ra != rb {
                parent.insert(ra, rb);
            }
        }
    }
    let mut strict = Vec::new();
    for (a, b) in priority.edges() {
        let ra = find(&mut parent, a);
        let rb = find(&mut parent, b);
        if ra == rb {
            return false;
        }
        strict.push((ra, rb));
    }
    find_cycle(strict).is_none()
}
